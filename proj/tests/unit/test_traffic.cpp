#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "srwa/error.hpp"
#include "srwa/traffic.hpp"

using namespace srwa;

namespace {

Topology complete(int n) {
  std::vector<std::pair<NodeId, NodeId>> f;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) f.emplace_back(i, j);
  return Topology(n, f);
}

// E[ceil(X)] for X ~ Exp(rate) clamped below at 1; ceil(X) >= 1 almost surely.
double ceil_exp_mean(double rate) {
  double total = 0.0;
  for (int k = 1; k < 100000; ++k) total += k * (std::exp(-rate * (k - 1)) - std::exp(-rate * k));
  return total;
}

}  // namespace

TEST_CASE("batch size mean is lambda_R within 3 sigma") {
  const Topology t = complete(5);
  const TrafficParams p{4.0, 1.0};
  Rng rng(12345);
  const int draws = 100000;
  double sum = 0.0;
  for (int k = 0; k < draws; ++k) sum += sample_batch(p, t, rng).total();
  const double sigma = std::sqrt(p.lambda_r / draws);
  CHECK(std::abs(sum / draws - p.lambda_r) <= 3 * sigma);
}

TEST_CASE("tiny rate gives an empty batch") {
  Rng rng(1);
  CHECK(sample_batch({0.0001, 1.0}, complete(3), rng).empty());
}

TEST_CASE("sampling is deterministic per seed") {
  const Topology t = complete(6);
  const TrafficParams p{5.0, 0.1};
  CHECK(sample_scenarios(p, t, 10, 42) == sample_scenarios(p, t, 10, 42));
  CHECK_FALSE(sample_scenarios(p, t, 10, 42).scenarios == sample_scenarios(p, t, 10, 43).scenarios);
  CHECK(sample_scenarios(p, t, 50, 1).scenarios.size() == 50);
  CHECK(sample_scenarios(p, t, 1, 1).scenarios.size() == 1);
  CHECK_THROWS(sample_scenarios(p, t, 0, 1));
}

TEST_CASE("ordered pairs are uniform within 5 sigma") {
  const int n = 5;
  const Topology t = complete(n);
  Rng rng(99);
  std::vector<long> count(n * n, 0);
  long total = 0;
  while (total < 1000000) {
    const DemandMatrix m = sample_batch({20.0, 1.0}, t, rng);
    for (const auto& [pair, c] : m.counts()) {
      CHECK(pair.first != pair.second);
      count[pair.first * n + pair.second] += c;
      total += c;
    }
  }
  const double p = 1.0 / (n * (n - 1));
  const double sigma = std::sqrt(total * p * (1 - p));
  for (int s = 0; s < n; ++s)
    for (int d = 0; d < n; ++d)
      if (s != d) CHECK(std::abs(count[s * n + d] - total * p) <= 5 * sigma);
}

TEST_CASE("holding time mean matches the analytic ceil-exponential mean") {
  const auto p = TrafficParams::from_mean_holding(1.0, 26.0);
  Rng rng(7);
  const int draws = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < draws; ++k) {
    const int h = sample_holding(p, rng);
    REQUIRE(h >= 1);
    sum += h;
    sum2 += double(h) * h;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt(sum2 / draws - mean * mean);
  const double expect = ceil_exp_mean(p.lambda_l);
  CHECK(expect == doctest::Approx(1.0 / (1.0 - std::exp(-p.lambda_l))));
  CHECK(std::abs(mean - expect) <= 4 * sd / std::sqrt(draws));
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(TrafficParams({0.0, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(TrafficParams({1.0, -1.0}).validate(), ConfigError);
}

TEST_CASE("scenario sample JSON round-trip") {
  const ScenarioSample s = sample_scenarios({3.0, 0.5}, complete(7), 20, 2024);
  const std::string text = to_json(s).dump();
  CHECK(scenario_sample_from_json(nlohmann::json::parse(text)) == s);
  CHECK(to_json(scenario_sample_from_json(nlohmann::json::parse(text))).dump() == text);
}

TEST_CASE("demand JSON rejects malformed keys and counts") {
  using nlohmann::json;
  CHECK_THROWS_AS(demand_from_json(json{{"0-1", 1}}), ParseError);
  CHECK_THROWS_AS(demand_from_json(json{{"0,1x", 1}}), ParseError);
  CHECK_THROWS_AS(demand_from_json(json{{"0,1", -1}}), ParseError);
  CHECK_THROWS_AS(demand_from_json(json{{"1,1", 1}}), ParseError);
  CHECK(demand_from_json(json{{"0,1", 0}}).empty());
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  CHECK(stream_label("arrivals") != stream_label("holding"));
}

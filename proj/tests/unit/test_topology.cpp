#include <doctest.h>

#include <map>
#include <memory>
#include <sstream>

#include "srwa/error.hpp"
#include "srwa/topology.hpp"

using namespace srwa;

namespace {

std::string data_path(const std::string& file) { return std::string(SRWA_DATA_DIR_DEFAULT) + "/" + file; }

Topology parse(const std::string& text) {
  std::istringstream in(text);
  return load_topology(in);
}

std::shared_ptr<const Topology> ring(int n, int w) {
  std::vector<std::pair<NodeId, NodeId>> f;
  for (int i = 0; i < n; ++i) f.emplace_back(i, (i + 1) % n);
  return std::make_shared<const Topology>(n, f, w);
}

}  // namespace

TEST_CASE("bundled networks have the published node and arc counts") {
  const std::map<std::string, std::pair<int, int>> expected = {
      {"abilene", {12, 30}}, {"cost239", {11, 50}}, {"nsf", {14, 42}},
      {"atlanta", {15, 44}}, {"usa", {24, 88}},     {"brazil", {27, 140}},
  };
  for (const auto& [name, counts] : expected) {
    CAPTURE(name);
    const Topology t = load_topology_file(data_path(name + ".edges"));
    CHECK(t.num_nodes() == counts.first);
    CHECK(t.num_arcs() == counts.second);
    CHECK(t.name() == name);
  }
}

TEST_CASE("single fiber") {
  const Topology t = parse("nodes 2\nedge 0 1\n");
  REQUIRE(t.num_arcs() == 2);
  REQUIRE(t.delta_out(0).size() == 1);
  CHECK(t.arc(t.delta_out(0)[0]).head == 1);
  REQUIRE(t.delta_in(0).size() == 1);
  CHECK(t.arc(t.delta_in(0)[0]).tail == 1);
  CHECK_THROWS_AS(t.delta_out(2), std::out_of_range);
}

TEST_CASE("multiplicity and comments") {
  const Topology t = parse("# header\nnodes 3\nedge 0 1 2  # two fibers\n\nedge 1 2\n");
  CHECK(t.num_arcs() == 6);
  CHECK(t.delta_out(1).size() == 3);
}

TEST_CASE("parse errors carry the line number") {
  auto line_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("nodes 2\nedge 0 0\n") == 2);
  CHECK(line_of("nodes 2\n\nedge 0 5\n") == 3);
  CHECK(line_of("nodes 2\nedge 0\n") == 2);
  CHECK(line_of("nodes 2\nlink 0 1\n") == 2);
  CHECK(line_of("edge 0 1\n") == 1);
  CHECK(line_of("nodes 2\nedge 0 1 x\n") == 2);
}

TEST_CASE("degrees match the edge list and cover every arc once") {
  const Topology t = load_topology_file(data_path("abilene.edges"));
  std::map<int, int> degree;
  for (const auto& [u, v] : t.fibers()) {
    ++degree[u];
    ++degree[v];
  }
  std::vector<int> seen(t.num_arcs(), 0);
  for (int v = 0; v < t.num_nodes(); ++v) {
    CHECK(static_cast<int>(t.delta_out(v).size()) == degree[v]);
    CHECK(static_cast<int>(t.delta_in(v).size()) == degree[v]);
    for (ArcId a : t.delta_out(v)) ++seen[a];
  }
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("provisioning, conflicts and drops") {
  auto topo = ring(4, 2);
  NetworkState empty(topo);
  // arc 0: 0->1, arc 2: 1->2
  const Provision a{{0, 2, 0, {0, 2}}, 3};
  const Provision b{{1, 2, 1, {2}}, 5};
  const std::vector<Provision> both{a, b};
  const NetworkState s = apply_provisioning(empty, both);
  CHECK(s.spectrum_usage() == 3);
  CHECK(total_path_length(s) == 3);
  CHECK(s.is_occupied(2, 0));
  CHECK(s.free_wavelengths(2) == 0);

  const Provision clash{{1, 2, 0, {2}}, 5};
  try {
    apply_provisioning(s, std::vector<Provision>{clash});
    FAIL("expected conflict");
  } catch (const ConflictError& e) {
    CHECK(e.arc() == 2);
    CHECK(e.wavelength() == 0);
  }
  CHECK_THROWS_AS(apply_provisioning(empty, std::vector<Provision>{a, a}), ConflictError);
  CHECK_THROWS_AS(apply_provisioning(empty, std::vector<Provision>{{{0, 2, 0, {0}}, 1}}), ModelError);

  CHECK(drop_expired(s, 2).spectrum_usage() == 3);
  const NetworkState one = drop_expired(s, 3);
  CHECK(one.spectrum_usage() == 3 - 2);
  CHECK(one.connections().size() == 1);
  CHECK(drop_expired(s, 9).spectrum_usage() == 0);

  // apply then drop restores occupancy exactly
  const NetworkState back = drop_expired(apply_provisioning(one, std::vector<Provision>{a}), 3);
  for (int w = 0; w < 2; ++w)
    for (int arc = 0; arc < topo->num_arcs(); ++arc) CHECK(back.is_free(arc, w) == one.is_free(arc, w));
}

TEST_CASE("figure example: two lightpaths sharing a fiber on one wavelength conflict") {
  auto topo = std::make_shared<const Topology>(load_topology_file(data_path("nsf.edges"), 3));
  // Node 6 -> node 1 and node 6 -> node 2 (1-based), both leaving node 6 over the
  // same fiber on the same wavelength: 5->2->0 and 5->2->0->1.
  auto arc = [&](int u, int v) {
    for (ArcId a : topo->delta_out(u))
      if (topo->arc(a).head == v) return a;
    return -1;
  };
  const Provision to1{{5, 0, 0, {arc(5, 2), arc(2, 0)}}, 1};
  const Provision to2{{5, 1, 0, {arc(5, 2), arc(2, 0), arc(0, 1)}}, 1};
  NetworkState s(topo);
  CHECK_THROWS_AS(apply_provisioning(s, std::vector<Provision>{to1, to2}), ConflictError);
  const Provision to1_other{{5, 0, 1, to1.lightpath.path}, 1};
  CHECK(apply_provisioning(s, std::vector<Provision>{to1_other, to2}).spectrum_usage() == 5);
}

TEST_CASE("replace_connections keeps ids and rejects conflicts") {
  auto topo = ring(4, 1);
  NetworkState s = apply_provisioning(NetworkState(topo), std::vector<Provision>{{{0, 1, 0, {0}}, 4}});
  const auto id = s.connections()[0].id;
  // reroute 0->1 the long way round: 0->3->2->1 uses arcs 7, 5, 3
  std::vector<ActiveConnection> moved{{id, {0, 1, 0, {7, 5, 3}}, 4}};
  const NetworkState r = replace_connections(s, moved);
  CHECK(r.connections()[0].id == id);
  CHECK(r.spectrum_usage() == 3);
  CHECK(r.is_free(0, 0));
  moved.push_back({id + 1, {3, 1, 0, {5, 3}}, 4});
  CHECK_THROWS_AS(replace_connections(s, moved), ConflictError);
}

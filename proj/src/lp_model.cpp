#include "srwa/lp_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "srwa/error.hpp"

namespace srwa {

std::string VarKey::name() const {
  std::ostringstream os;
  switch (kind) {
    case VarKind::kX: os << "x_" << s << "_" << d << "_" << arc << "_" << wavelength; break;
    case VarKind::kY:
      os << "y_" << s << "_" << d << "_" << arc << "_" << wavelength << "_" << scenario;
      break;
    case VarKind::kZ: os << "z_" << s << "_" << d << "_" << scenario; break;
    case VarKind::kEta: os << "eta_" << scenario; break;
    case VarKind::kBeta: os << "beta_" << arc; break;
  }
  return os.str();
}

std::size_t VarKeyHash::operator()(const VarKey& k) const noexcept {
  std::size_t h = static_cast<std::size_t>(k.kind);
  for (int v : {k.s, k.d, k.arc, k.wavelength, k.scenario}) {
    h ^= std::hash<int>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

int LpModel::add_column(const Column& c) {
  if (c.lb > c.ub) throw ModelError("column " + c.key.name() + " has lb > ub");
  if (c.integer && (!std::isfinite(c.lb) || !std::isfinite(c.ub))) {
    throw ModelError("integer column " + c.key.name() + " needs finite bounds");
  }
  const int j = num_cols();
  if (!index_.emplace(c.key, j).second) throw ModelError("duplicate column " + c.key.name());
  columns_.push_back(c);
  return j;
}

int LpModel::add_row(Row r) {
  if (r.cols.size() != r.vals.size()) throw ModelError("row index/value size mismatch");
  for (int j : r.cols) {
    if (j < 0 || j >= num_cols()) throw ModelError("row references undeclared column");
  }
  rows_.push_back(std::move(r));
  return num_rows() - 1;
}

std::optional<int> LpModel::find(const VarKey& k) const {
  auto it = index_.find(k);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int LpModel::index(const VarKey& k) const {
  auto j = find(k);
  if (!j) throw ModelError("unknown variable " + k.name());
  return *j;
}

void LpModel::relax_integrality() {
  for (auto& c : columns_) c.integer = false;
}

void LpModel::relax_integrality(VarKind kind) {
  for (auto& c : columns_) {
    if (c.key.kind == kind) c.integer = false;
  }
}

double LpModel::objective(const std::vector<double>& values) const {
  double z = 0.0;
  for (int j = 0; j < num_cols(); ++j) z += columns_[j].obj * values.at(j);
  return z;
}

double LpModel::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max(worst, columns_[j].lb - values[j]);
    worst = std::max(worst, values[j] - columns_[j].ub);
  }
  for (const Row& r : rows_) {
    double act = 0.0;
    for (std::size_t k = 0; k < r.cols.size(); ++k) act += r.vals[k] * values[r.cols[k]];
    if (r.sense != Sense::kGe) worst = std::max(worst, act - r.rhs);
    if (r.sense != Sense::kLe) worst = std::max(worst, r.rhs - act);
  }
  return worst;
}

int var_index(const LpModel& model, const VarKey& key) { return model.index(key); }

namespace {

void write_term(std::ostream& out, double coef, const std::string& name, bool first) {
  if (coef < 0) {
    out << (first ? "- " : " - ");
  } else if (!first) {
    out << " + ";
  }
  const double a = std::abs(coef);
  if (a != 1.0) out << a << " ";
  out << name;
}

}  // namespace

void write_lp(const LpModel& model, std::ostream& out) {
  out.precision(17);
  out << "Maximize\n obj:";
  bool first = true;
  for (const auto& c : model.columns()) {
    if (c.obj == 0.0) continue;
    out << (first ? " " : "");
    write_term(out, c.obj, c.key.name(), first);
    first = false;
  }
  if (first) out << " 0 " << (model.num_cols() > 0 ? model.key(0).name() : "");
  out << "\nSubject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const Row& r = model.row(i);
    out << " c" << i << ":";
    bool head = true;
    for (std::size_t k = 0; k < r.cols.size(); ++k) {
      if (r.vals[k] == 0.0) continue;
      out << (head ? " " : "");
      write_term(out, r.vals[k], model.key(r.cols[k]).name(), head);
      head = false;
    }
    if (head) out << " 0 " << (model.num_cols() > 0 ? model.key(0).name() : "");
    out << (r.sense == Sense::kLe ? " <= " : r.sense == Sense::kGe ? " >= " : " = ") << r.rhs << "\n";
  }
  out << "Bounds\n";
  for (const auto& c : model.columns()) {
    const std::string n = c.key.name();
    if (std::isinf(c.lb) && std::isinf(c.ub)) {
      out << " " << n << " free\n";
    } else {
      out << " ";
      if (std::isinf(c.lb)) out << "-inf"; else out << c.lb;
      out << " <= " << n << " <= ";
      if (std::isinf(c.ub)) out << "+inf"; else out << c.ub;
      out << "\n";
    }
  }
  bool any_int = std::any_of(model.columns().begin(), model.columns().end(),
                             [](const Column& c) { return c.integer; });
  if (any_int) {
    out << "General\n";
    for (const auto& c : model.columns()) {
      if (c.integer) out << " " << c.key.name() << "\n";
    }
  }
  out << "End\n";
}

}  // namespace srwa

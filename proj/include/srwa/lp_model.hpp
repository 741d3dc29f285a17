#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace srwa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLe, kGe, kEq };

enum class VarKind { kX, kY, kZ, kEta, kBeta };

// Semantic name of a column. x: (s,d,arc,w); y: (s,d,arc,w,scenario);
// z: (s,d,scenario); eta: scenario; beta: arc. Unused fields stay -1.
struct VarKey {
  VarKind kind = VarKind::kX;
  int s = -1;
  int d = -1;
  int arc = -1;
  int wavelength = -1;
  int scenario = -1;

  static VarKey x(int s, int d, int arc, int w) { return {VarKind::kX, s, d, arc, w, -1}; }
  static VarKey y(int s, int d, int arc, int w, int xi) { return {VarKind::kY, s, d, arc, w, xi}; }
  static VarKey z(int s, int d, int xi) { return {VarKind::kZ, s, d, -1, -1, xi}; }
  static VarKey eta(int xi) { return {VarKind::kEta, -1, -1, -1, -1, xi}; }
  static VarKey beta(int arc) { return {VarKind::kBeta, -1, -1, arc, -1, -1}; }

  friend auto operator<=>(const VarKey&, const VarKey&) = default;
  std::string name() const;
};

struct VarKeyHash {
  std::size_t operator()(const VarKey& k) const noexcept;
};

enum class RowKind {
  kConflict,       // sum_sd x <= 1 per wavelink
  kFlow,           // flow conservation per (pair, w, node)
  kDemand,         // granted <= r (or == r)
  kCapacity,       // recourse: sum_sd y <= 1 - sum_sd x per wavelink
  kGrant,          // z - sum y == 0
  kEtaLink,        // eta - sum z <= 0
  kBetaDef,        // beta - sum x == 0
  kArcCapacity,    // relaxed recourse: sum_w sum_sd y <= cap - beta
  kUnit,           // relaxed recourse: sum_sd y <= 1 per wavelink
  kCut,
};

struct RowKey {
  RowKind kind = RowKind::kCut;
  int s = -1;
  int d = -1;
  int arc = -1;
  int wavelength = -1;
  int node = -1;
  int scenario = -1;
};

struct Column {
  VarKey key;
  double lb = 0.0;
  double ub = kInf;
  double obj = 0.0;
  bool integer = false;
};

struct Row {
  RowKey key;
  std::vector<int> cols;
  std::vector<double> vals;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

// Sparse constraint system, always maximized. Columns are addressed by index
// and by VarKey (a bijection).
class LpModel {
 public:
  int add_column(const Column& c);
  int add_row(Row r);

  int num_cols() const { return static_cast<int>(columns_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Column& column(int j) const { return columns_.at(j); }
  Column& column(int j) { return columns_.at(j); }
  const Row& row(int i) const { return rows_.at(i); }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }

  std::optional<int> find(const VarKey& k) const;
  // Throws ModelError for undeclared keys.
  int index(const VarKey& k) const;
  const VarKey& key(int j) const { return columns_.at(j).key; }

  // Marks every integer column continuous (or only those of `kind`).
  void relax_integrality();
  void relax_integrality(VarKind kind);

  double objective(const std::vector<double>& values) const;
  // Largest violation of rows and bounds at `values`.
  double max_violation(const std::vector<double>& values) const;

 private:
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  std::unordered_map<VarKey, int, VarKeyHash> index_;
};

int var_index(const LpModel& model, const VarKey& key);

// CPLEX LP text format.
void write_lp(const LpModel& model, std::ostream& out);

}  // namespace srwa

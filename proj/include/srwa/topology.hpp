#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace srwa {

using NodeId = int;
using ArcId = int;
using Wavelength = int;

struct Arc {
  ArcId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
};

// Physical fiber network. Each undirected fiber contributes two directed arcs:
// fiber i yields arc 2i (u -> v) and arc 2i+1 (v -> u). Immutable once built.
class Topology {
 public:
  Topology(int num_nodes, const std::vector<std::pair<NodeId, NodeId>>& fibers,
           int num_wavelengths = 1, std::string name = {});

  int num_nodes() const { return num_nodes_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int num_wavelengths() const { return num_wavelengths_; }
  const std::string& name() const { return name_; }

  const Arc& arc(ArcId id) const;
  std::span<const Arc> arcs() const { return arcs_; }

  // Arcs leaving / entering v. Throws std::out_of_range for unknown nodes.
  std::span<const ArcId> delta_out(NodeId v) const;
  std::span<const ArcId> delta_in(NodeId v) const;

  // Undirected fiber list, one entry per pair of arcs.
  std::vector<std::pair<NodeId, NodeId>> fibers() const;

  Topology with_wavelengths(int num_wavelengths) const;

 private:
  void check_node(NodeId v) const;

  int num_nodes_;
  int num_wavelengths_;
  std::string name_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

enum class TopologyFormat { kEdgeList };

// Reads the edge-list format:
//   nodes <n>
//   edge <u> <v> [multiplicity]
// Blank lines and '#' comments are ignored. Errors carry the line number.
Topology load_topology(std::istream& in, TopologyFormat format = TopologyFormat::kEdgeList,
                       int num_wavelengths = 1, std::string name = {});
Topology load_topology_file(const std::string& path, int num_wavelengths = 1);

std::span<const ArcId> delta_out(const Topology& t, NodeId v);
std::span<const ArcId> delta_in(const Topology& t, NodeId v);

struct Lightpath {
  NodeId source = 0;
  NodeId destination = 0;
  Wavelength wavelength = 0;
  std::vector<ArcId> path;

  friend bool operator==(const Lightpath&, const Lightpath&) = default;
};

// Throws ModelError unless `lp` is a simple directed source->destination path
// on a valid wavelength.
void validate_lightpath(const Topology& t, const Lightpath& lp);

struct ActiveConnection {
  std::uint64_t id = 0;
  Lightpath lightpath;
  int expiry_stage = 0;
};

struct Provision {
  Lightpath lightpath;
  int expiry_stage = 0;
};

// Occupied wavelinks plus the connections holding them. Value type: copy to
// evaluate speculatively.
class NetworkState {
 public:
  explicit NetworkState(std::shared_ptr<const Topology> topology);

  const Topology& topology() const { return *topology_; }
  const std::shared_ptr<const Topology>& topology_ptr() const { return topology_; }

  bool is_free(ArcId arc, Wavelength w) const;
  bool is_occupied(ArcId arc, Wavelength w) const { return !is_free(arc, w); }
  // Number of wavelengths on which `arc` is free.
  int free_wavelengths(ArcId arc) const;
  // Sum over wavelengths of occupied arcs.
  int spectrum_usage() const { return occupied_count_; }

  const std::vector<ActiveConnection>& connections() const { return connections_; }

  friend NetworkState apply_provisioning(const NetworkState&, std::span<const Provision>);
  friend NetworkState drop_expired(const NetworkState&, int);
  friend NetworkState replace_connections(const NetworkState&, std::vector<ActiveConnection>);

 private:
  std::size_t slot(ArcId arc, Wavelength w) const;

  std::shared_ptr<const Topology> topology_;
  std::vector<std::uint8_t> occupied_;  // [w * |L| + arc]
  int occupied_count_ = 0;
  std::vector<ActiveConnection> connections_;
  std::uint64_t next_id_ = 1;
};

// Adds lightpaths. Throws ConflictError on the first (arc, w) that is already
// occupied or used twice within `assignment`; throws ModelError for an
// invalid path. The input state is left untouched.
NetworkState apply_provisioning(const NetworkState& state, std::span<const Provision> assignment);

// Removes connections with expiry_stage <= stage.
NetworkState drop_expired(const NetworkState& state, int stage);

// Rebuilds the state from scratch with the given connection set (used when
// rerouting). Conflicts throw as in apply_provisioning.
NetworkState replace_connections(const NetworkState& state, std::vector<ActiveConnection> connections);

// Sum of path lengths of active connections; equals spectrum_usage() on every
// reachable state.
int total_path_length(const NetworkState& state);

}  // namespace srwa

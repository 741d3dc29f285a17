#include "srwa/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "srwa/error.hpp"

namespace srwa {

Topology::Topology(int num_nodes, const std::vector<std::pair<NodeId, NodeId>>& fibers,
                   int num_wavelengths, std::string name)
    : num_nodes_(num_nodes), num_wavelengths_(num_wavelengths), name_(std::move(name)) {
  if (num_nodes < 1) throw ModelError("topology needs at least one node");
  if (num_wavelengths < 1) throw ModelError("topology needs at least one wavelength");
  out_.resize(num_nodes);
  in_.resize(num_nodes);
  arcs_.reserve(2 * fibers.size());
  for (const auto& [u, v] : fibers) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw ModelError("fiber endpoint out of range");
    }
    if (u == v) throw ModelError("self-loop fiber at node " + std::to_string(u));
    for (auto [tail, head] : {std::pair{u, v}, std::pair{v, u}}) {
      ArcId id = static_cast<ArcId>(arcs_.size());
      arcs_.push_back({id, tail, head});
      out_[tail].push_back(id);
      in_[head].push_back(id);
    }
  }
}

const Arc& Topology::arc(ArcId id) const {
  if (id < 0 || id >= num_arcs()) throw std::out_of_range("unknown arc " + std::to_string(id));
  return arcs_[id];
}

void Topology::check_node(NodeId v) const {
  if (v < 0 || v >= num_nodes_) throw std::out_of_range("unknown node " + std::to_string(v));
}

std::span<const ArcId> Topology::delta_out(NodeId v) const {
  check_node(v);
  return out_[v];
}

std::span<const ArcId> Topology::delta_in(NodeId v) const {
  check_node(v);
  return in_[v];
}

std::vector<std::pair<NodeId, NodeId>> Topology::fibers() const {
  std::vector<std::pair<NodeId, NodeId>> result;
  for (std::size_t i = 0; i < arcs_.size(); i += 2) result.emplace_back(arcs_[i].tail, arcs_[i].head);
  return result;
}

Topology Topology::with_wavelengths(int num_wavelengths) const {
  return Topology(num_nodes_, fibers(), num_wavelengths, name_);
}

std::span<const ArcId> delta_out(const Topology& t, NodeId v) { return t.delta_out(v); }
std::span<const ArcId> delta_in(const Topology& t, NodeId v) { return t.delta_in(v); }

Topology load_topology(std::istream& in, TopologyFormat format, int num_wavelengths,
                       std::string name) {
  if (format != TopologyFormat::kEdgeList) throw ParseError("unsupported topology format");
  int num_nodes = -1;
  std::vector<std::pair<NodeId, NodeId>> fibers;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "nodes") {
      if (num_nodes >= 0) throw ParseError("duplicate nodes header", line_no);
      if (!(ls >> num_nodes) || num_nodes < 1) throw ParseError("bad node count", line_no);
    } else if (word == "edge") {
      if (num_nodes < 0) throw ParseError("edge before nodes header", line_no);
      long long u = 0, v = 0, mult = 1;
      if (!(ls >> u >> v)) throw ParseError("expected 'edge <u> <v> [multiplicity]'", line_no);
      if (!(ls >> mult)) {
        mult = 1;
        ls.clear();
      }
      if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
        throw ParseError("node id out of range", line_no);
      }
      if (u == v) throw ParseError("self-loop edge", line_no);
      if (mult < 1) throw ParseError("multiplicity must be positive", line_no);
      for (long long k = 0; k < mult; ++k) fibers.emplace_back(int(u), int(v));
    } else {
      throw ParseError("unknown directive '" + word + "'", line_no);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("trailing token '" + extra + "'", line_no);
  }
  if (num_nodes < 0) throw ParseError("missing nodes header");
  return Topology(num_nodes, fibers, num_wavelengths, std::move(name));
}

Topology load_topology_file(const std::string& path, int num_wavelengths) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open topology file " + path);
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find('.'); dot != std::string::npos) name = name.substr(0, dot);
  return load_topology(in, TopologyFormat::kEdgeList, num_wavelengths, name);
}

void validate_lightpath(const Topology& t, const Lightpath& lp) {
  if (lp.source < 0 || lp.source >= t.num_nodes() || lp.destination < 0 ||
      lp.destination >= t.num_nodes()) {
    throw ModelError("lightpath endpoint out of range");
  }
  if (lp.source == lp.destination) throw ModelError("lightpath source equals destination");
  if (lp.wavelength < 0 || lp.wavelength >= t.num_wavelengths()) {
    throw ModelError("lightpath wavelength out of range");
  }
  if (lp.path.empty()) throw ModelError("empty lightpath");
  std::vector<char> seen(t.num_nodes(), 0);
  NodeId at = lp.source;
  seen[at] = 1;
  for (ArcId a : lp.path) {
    const Arc& arc = t.arc(a);
    if (arc.tail != at) throw ModelError("lightpath is not connected at arc " + std::to_string(a));
    at = arc.head;
    if (seen[at]) throw ModelError("lightpath revisits node " + std::to_string(at));
    seen[at] = 1;
  }
  if (at != lp.destination) throw ModelError("lightpath does not end at its destination");
}

NetworkState::NetworkState(std::shared_ptr<const Topology> topology)
    : topology_(std::move(topology)) {
  if (!topology_) throw ModelError("null topology");
  occupied_.assign(std::size_t(topology_->num_arcs()) * topology_->num_wavelengths(), 0);
}

std::size_t NetworkState::slot(ArcId arc, Wavelength w) const {
  if (arc < 0 || arc >= topology_->num_arcs() || w < 0 || w >= topology_->num_wavelengths()) {
    throw std::out_of_range("wavelink out of range");
  }
  return std::size_t(w) * topology_->num_arcs() + arc;
}

bool NetworkState::is_free(ArcId arc, Wavelength w) const { return occupied_[slot(arc, w)] == 0; }

int NetworkState::free_wavelengths(ArcId arc) const {
  int count = 0;
  for (Wavelength w = 0; w < topology_->num_wavelengths(); ++w) count += is_free(arc, w) ? 1 : 0;
  return count;
}

NetworkState apply_provisioning(const NetworkState& state, std::span<const Provision> assignment) {
  NetworkState next = state;
  for (const Provision& p : assignment) {
    validate_lightpath(*next.topology_, p.lightpath);
    for (ArcId a : p.lightpath.path) {
      auto& cell = next.occupied_[next.slot(a, p.lightpath.wavelength)];
      if (cell) throw ConflictError(a, p.lightpath.wavelength);
      cell = 1;
      ++next.occupied_count_;
    }
    next.connections_.push_back({next.next_id_++, p.lightpath, p.expiry_stage});
  }
  return next;
}

NetworkState drop_expired(const NetworkState& state, int stage) {
  NetworkState next = state;
  std::vector<ActiveConnection> kept;
  kept.reserve(next.connections_.size());
  for (auto& c : next.connections_) {
    if (c.expiry_stage <= stage) {
      for (ArcId a : c.lightpath.path) {
        next.occupied_[next.slot(a, c.lightpath.wavelength)] = 0;
        --next.occupied_count_;
      }
    } else {
      kept.push_back(std::move(c));
    }
  }
  next.connections_ = std::move(kept);
  return next;
}

NetworkState replace_connections(const NetworkState& state, std::vector<ActiveConnection> connections) {
  NetworkState next(state.topology_);
  next.next_id_ = state.next_id_;
  for (auto& c : connections) {
    validate_lightpath(*next.topology_, c.lightpath);
    for (ArcId a : c.lightpath.path) {
      auto& cell = next.occupied_[next.slot(a, c.lightpath.wavelength)];
      if (cell) throw ConflictError(a, c.lightpath.wavelength);
      cell = 1;
      ++next.occupied_count_;
    }
    next.next_id_ = std::max(next.next_id_, c.id + 1);
  }
  next.connections_ = std::move(connections);
  return next;
}

int total_path_length(const NetworkState& state) {
  int total = 0;
  for (const auto& c : state.connections()) total += static_cast<int>(c.lightpath.path.size());
  return total;
}

}  // namespace srwa

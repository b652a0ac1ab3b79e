#include "sstvrp/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace sstvrp {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Minute ceil_minutes(double distance) {
  const Minute tt = static_cast<Minute>(std::ceil(distance));
  return std::max<Minute>(tt, 1);
}

// Deduplicating node table keyed by exact coordinates.
class NodeTable {
 public:
  NodeId intern(double x, double y, PhysicalNetwork& net) {
    auto it = index_.find({x, y});
    if (it != index_.end()) return it->second;
    Node n;
    n.id = static_cast<NodeId>(net.nodes.size());
    n.x = x;
    n.y = y;
    net.nodes.push_back(n);
    index_[{x, y}] = n.id;
    return n.id;
  }

 private:
  std::map<std::pair<double, double>, NodeId> index_;
};

}  // namespace

void build_complete_links(PhysicalNetwork& network) {
  network.links.clear();
  const int n = static_cast<int>(network.nodes.size());
  network.links.reserve(static_cast<size_t>(n) * (n - 1));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      Link l;
      l.from = a;
      l.to = b;
      l.distance = euclidean(network.nodes[a], network.nodes[b]);
      l.travel_time = TravelTimeProfile::constant(ceil_minutes(l.distance));
      network.links.push_back(l);
    }
  }
  network.complete_metric = true;
  network.index_links();
}

std::string classify_instance(const GeneratorParams& p) {
  std::string prefix;
  if (p.unit_loads && p.capacity == 15 && p.window_len == 60) prefix = "XX";
  else if (p.unit_loads && p.capacity == 15 && p.window_len == 120) prefix = "YY";
  else if (!p.unit_loads && p.capacity == 15 && p.window_len == 60) prefix = "AA";
  else if (!p.unit_loads && p.capacity == 20 && p.window_len == 60) prefix = "BB";
  else if (!p.unit_loads && p.capacity == 15 && p.window_len == 120) prefix = "CC";
  else if (!p.unit_loads && p.capacity == 20 && p.window_len == 120) prefix = "DD";
  else prefix = "GEN";
  return prefix + std::to_string(p.passengers);
}

Instance generate_random_instance(const GeneratorParams& params) {
  if (params.passengers < 1) throw GenerationError("need at least one passenger");
  if (params.window_len < 1) throw GenerationError("window length must be positive");
  if (params.capacity < 1) throw GenerationError("capacity must be positive");
  if (!params.unit_loads && params.capacity < 5)
    throw GenerationError("capacity below the minimum load of 5");

  Rng rng(params.seed);
  Instance inst;
  inst.name = classify_instance(params);
  inst.horizon = params.horizon;
  inst.vehicle_capacity = params.capacity;
  inst.window_class = params.window_len;
  inst.unit_loads = params.unit_loads;

  NodeTable table;
  const double mid = params.square_side / 2.0;
  inst.depot = table.intern(mid, mid, inst.network);
  const Node depot_node = inst.network.nodes[static_cast<size_t>(inst.depot)];

  for (int j = 0; j < params.passengers; ++j) {
    PassengerRequest p;
    p.id = j + 1;
    Node o, d;
    do {
      o.x = rng.uniform(0.0, params.square_side);
      o.y = rng.uniform(0.0, params.square_side);
      d.x = rng.uniform(0.0, params.square_side);
      d.y = rng.uniform(0.0, params.square_side);
    } while (o.x == d.x && o.y == d.y);
    p.load = params.unit_loads ? 1 : rng.uniform_int(5, params.capacity);

    const Minute direct = ceil_minutes(euclidean(o, d));
    const Minute reach = ceil_minutes(euclidean(depot_node, o));
    const Minute slack = ceil_minutes(euclidean(d, depot_node));
    const Minute lo = std::max(0, reach - params.window_len);
    const Minute hi = params.horizon - params.window_len - direct - slack;
    if (hi < lo)
      throw GenerationError("window of length " + std::to_string(params.window_len) +
                            " cannot fit inside the horizon");
    const Minute a = rng.uniform_int(lo, hi);
    p.depart_earliest = a;
    p.depart_latest = a + params.window_len;
    p.arrive_earliest = a + direct;
    p.arrive_latest = p.arrive_earliest + params.window_len;

    p.origin = table.intern(o.x, o.y, inst.network);
    p.destination = table.intern(d.x, d.y, inst.network);
    inst.passengers.push_back(p);
  }

  build_complete_links(inst.network);
  inst.validate();
  return inst;
}

Instance parse_instance(std::istream& in, const std::string& name) {
  Instance inst;
  inst.name = name;
  std::string line;
  int line_no = 0;
  int n = -1;
  int passengers_read = 0;
  bool header_read = false;
  bool depot_read = false;
  bool has_network_section = false;

  struct RawPassenger {
    int id;
    double ox, oy, dx, dy;
    int load;
    Minute a, b, a2, b2;
  };
  std::vector<RawPassenger> raw;
  double depot_x = 0.0, depot_y = 0.0;
  std::vector<std::pair<NodeId, Node>> explicit_nodes;
  struct RawLink {
    NodeId from, to;
    double dist;
    std::vector<Minute> tts;
    int line;
  };
  std::vector<RawLink> raw_links;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    if (!header_read) {
      if (!(ss >> n >> inst.vehicle_capacity >> inst.horizon >> inst.window_class)) {
        throw ParseError(line_no, "malformed header");
      }
      int unit = 0;
      if (!(ss >> unit)) throw ParseError(line_no, "malformed header");
      inst.unit_loads = unit != 0;
      if (n < 0) throw ParseError(line_no, "negative passenger count");
      if (inst.horizon < 1) throw ParseError(line_no, "horizon must be positive");
      header_read = true;
      continue;
    }
    std::string tag;
    ss >> tag;
    if (!depot_read) {
      if (tag != "depot") throw ParseError(line_no, "expected the depot line");
      if (!(ss >> depot_x >> depot_y)) throw ParseError(line_no, "malformed depot line");
      depot_read = true;
      continue;
    }
    if (passengers_read < n && tag != "node" && tag != "link") {
      RawPassenger p;
      std::istringstream ps(line);
      if (!(ps >> p.id >> p.ox >> p.oy >> p.dx >> p.dy >> p.load >> p.a >> p.b >> p.a2 >>
            p.b2))
        throw ParseError(line_no, "malformed passenger record");
      if (p.b < p.a || p.b2 < p.a2) throw ParseError(line_no, "empty time window");
      if (p.a < 0 || p.b > inst.horizon || p.a2 < 0 || p.b2 > inst.horizon)
        throw ParseError(line_no, "window outside horizon");
      if (p.load < 1) throw ParseError(line_no, "load must be positive");
      raw.push_back(p);
      ++passengers_read;
      continue;
    }
    if (tag == "node") {
      has_network_section = true;
      NodeId id;
      Node node;
      if (!(ss >> id >> node.x >> node.y)) throw ParseError(line_no, "malformed node line");
      node.id = id;
      explicit_nodes.emplace_back(id, node);
      continue;
    }
    if (tag == "link") {
      has_network_section = true;
      RawLink l;
      l.line = line_no;
      if (!(ss >> l.from >> l.to >> l.dist)) throw ParseError(line_no, "malformed link line");
      Minute tt;
      while (ss >> tt) {
        if (tt < 1) throw ParseError(line_no, "link travel time below one minute");
        l.tts.push_back(tt);
      }
      if (l.tts.empty()) throw ParseError(line_no, "link line carries no travel time");
      raw_links.push_back(l);
      continue;
    }
    throw ParseError(line_no, "unexpected line");
  }
  if (!header_read) throw ParseError(line_no, "missing header");
  if (!depot_read) throw ParseError(line_no, "missing depot line");
  if (passengers_read != n)
    throw ParseError(line_no, "expected " + std::to_string(n) + " passenger records, got " +
                                  std::to_string(passengers_read));

  if (has_network_section) {
    // Explicit road network: node ids must be dense and links reference them.
    inst.network.nodes.resize(explicit_nodes.size());
    std::vector<bool> seen(explicit_nodes.size(), false);
    for (const auto& [id, node] : explicit_nodes) {
      if (id < 0 || id >= static_cast<NodeId>(explicit_nodes.size()))
        throw ParseError(0, "node id " + std::to_string(id) + " out of range");
      inst.network.nodes[static_cast<size_t>(id)] = node;
      seen[static_cast<size_t>(id)] = true;
    }
    for (size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw ParseError(0, "node id " + std::to_string(i) + " missing");
    for (const RawLink& l : raw_links) {
      if (l.from < 0 || l.from >= static_cast<NodeId>(inst.network.nodes.size()) ||
          l.to < 0 || l.to >= static_cast<NodeId>(inst.network.nodes.size()))
        throw ParseError(l.line, "unknown node id in link");
      Link link;
      link.from = l.from;
      link.to = l.to;
      link.distance = l.dist;
      link.travel_time = l.tts.size() == 1 ? TravelTimeProfile::constant(l.tts[0])
                                           : TravelTimeProfile::table(l.tts);
      inst.network.links.push_back(link);
    }
    inst.network.complete_metric = false;
    inst.network.index_links();
    auto nearest = [&](double x, double y) {
      NodeId best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (const Node& node : inst.network.nodes) {
        const double d = std::hypot(node.x - x, node.y - y);
        if (d < best_d) {
          best_d = d;
          best = node.id;
        }
      }
      return best;
    };
    inst.depot = nearest(depot_x, depot_y);
    for (const RawPassenger& p : raw) {
      PassengerRequest req;
      req.id = p.id;
      req.origin = nearest(p.ox, p.oy);
      req.destination = nearest(p.dx, p.dy);
      req.load = p.load;
      req.depart_earliest = p.a;
      req.depart_latest = p.b;
      req.arrive_earliest = p.a2;
      req.arrive_latest = p.b2;
      if (req.origin == req.destination)
        throw ParseError(0, "passenger " + std::to_string(p.id) +
                                " origin and destination map to the same node");
      inst.passengers.push_back(req);
    }
  } else {
    NodeTable table;
    inst.depot = table.intern(depot_x, depot_y, inst.network);
    for (const RawPassenger& p : raw) {
      PassengerRequest req;
      req.id = p.id;
      req.origin = table.intern(p.ox, p.oy, inst.network);
      req.destination = table.intern(p.dx, p.dy, inst.network);
      req.load = p.load;
      req.depart_earliest = p.a;
      req.depart_latest = p.b;
      req.arrive_earliest = p.a2;
      req.arrive_latest = p.b2;
      if (req.origin == req.destination)
        throw ParseError(0, "passenger " + std::to_string(p.id) +
                                " origin equals destination");
      inst.passengers.push_back(req);
    }
    build_complete_links(inst.network);
  }
  inst.validate();
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  std::string name = path;
  const size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_instance(in, name);
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << inst.passengers.size() << ' ' << inst.vehicle_capacity << ' ' << inst.horizon
      << ' ' << inst.window_class << ' ' << (inst.unit_loads ? 1 : 0) << '\n';
  const Node& depot = inst.network.nodes[static_cast<size_t>(inst.depot)];
  out << "depot " << format_double(depot.x) << ' ' << format_double(depot.y) << '\n';
  for (const PassengerRequest& p : inst.passengers) {
    const Node& o = inst.network.nodes[static_cast<size_t>(p.origin)];
    const Node& d = inst.network.nodes[static_cast<size_t>(p.destination)];
    out << p.id << ' ' << format_double(o.x) << ' ' << format_double(o.y) << ' '
        << format_double(d.x) << ' ' << format_double(d.y) << ' ' << p.load << ' '
        << p.depart_earliest << ' ' << p.depart_latest << ' ' << p.arrive_earliest << ' '
        << p.arrive_latest << '\n';
  }
  if (!inst.network.complete_metric) {
    for (const Node& n : inst.network.nodes)
      out << "node " << n.id << ' ' << format_double(n.x) << ' ' << format_double(n.y)
          << '\n';
    for (const Link& l : inst.network.links) {
      out << "link " << l.from << ' ' << l.to << ' ' << format_double(l.distance);
      if (l.travel_time.is_constant()) {
        out << ' ' << l.travel_time.at(0);
      } else {
        for (Minute tt : l.travel_time.values()) out << ' ' << tt;
      }
      out << '\n';
    }
  }
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  write_instance(inst, out);
}

}  // namespace sstvrp

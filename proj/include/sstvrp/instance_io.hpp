#pragma once

#include <iosfwd>
#include <string>

#include "sstvrp/model.hpp"

namespace sstvrp {

struct GeneratorParams {
  int passengers = 10;
  int capacity = 15;
  int window_len = 60;  // 60 or 120 for the named instance classes
  bool unit_loads = false;
  std::uint64_t seed = 1;
  Minute horizon = 1000;
  double square_side = 50.0;  // endpoints uniform on [0, side]^2, depot at the center
};

// Random planar instance: endpoints uniform on the square, depot at the
// center, loads uniform in [5, capacity] (or 1 with unit_loads), feasible
// windows of the requested length. Deterministic for a fixed seed.
Instance generate_random_instance(const GeneratorParams& params);

Instance parse_instance(std::istream& in, const std::string& name = "instance");
Instance parse_instance_file(const std::string& path);

void write_instance(const Instance& instance, std::ostream& out);
void write_instance_file(const Instance& instance, const std::string& path);

// All-pairs Euclidean links (distance = Euclidean, travel time = ceil of it)
// over the given nodes; used for planar instances with no explicit network.
void build_complete_links(PhysicalNetwork& network);

// Classification name for generated instances (AA/BB/CC/DD/XX/YY + n when
// the parameters match a named class, GEN<n> otherwise).
std::string classify_instance(const GeneratorParams& params);

}  // namespace sstvrp

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "mmnetloc/graph.hpp"

namespace mmnetloc {

// Malformed document; the message carries file path plus line or field
// context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Network and its measurements travel together; seed records the generator
// stream the instance came from.
struct NetworkDocument {
  Network net;
  Measurements meas;
  std::uint64_t seed = 0;
};

// Canonical JSON form:  fields p, n, seed, sigma, positions, edges, anchors,
// anchor_links, d, r. Floats carry 17 significant digits so a load/save
// round trip is bit-exact and a re-save is byte-identical.
std::string to_json(const NetworkDocument& doc);
void save_network(const std::string& path, const NetworkDocument& doc);

NetworkDocument from_json(const std::string& text, const std::string& origin = "<string>");
NetworkDocument load_network(const std::string& path);

// 17-significant-digit float formatting shared by every file this project
// writes.
std::string format_double(double v);

}  // namespace mmnetloc

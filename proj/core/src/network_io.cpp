#include "mmnetloc/network_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mmnetloc {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_vector_row(std::ostream& os, const Eigen::VectorXd& v) {
  os << '[';
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    if (c) os << ", ";
    os << format_double(v(c));
  }
  os << ']';
}

template <class Row>
void write_rows(std::ostream& os, const char* name, int count, Row&& row) {
  os << "  \"" << name << "\": [";
  for (int k = 0; k < count; ++k) {
    os << (k ? ",\n    " : "\n    ");
    row(k);
  }
  os << (count ? "\n  ]" : "]");
}

}  // namespace

std::string to_json(const NetworkDocument& doc) {
  const Network& net = doc.net;
  std::ostringstream os;
  os << "{\n";
  os << "  \"p\": " << net.p << ",\n";
  os << "  \"n\": " << net.n << ",\n";
  os << "  \"seed\": " << doc.seed << ",\n";
  os << "  \"sigma\": " << format_double(doc.meas.sigma) << ",\n";
  if (net.true_positions) {
    write_rows(os, "positions", net.n, [&](int i) {
      write_vector_row(os, net.true_positions->segment(
                               static_cast<Eigen::Index>(i) * net.p, net.p));
    });
  } else {
    os << "  \"positions\": null";
  }
  os << ",\n";
  write_rows(os, "edges", net.edge_count(), [&](int e) {
    os << '[' << net.edges[e].i << ", " << net.edges[e].j << ']';
  });
  os << ",\n";
  write_rows(os, "anchors", net.anchor_count(),
             [&](int k) { write_vector_row(os, net.anchors[k]); });
  os << ",\n";
  write_rows(os, "anchor_links", net.n, [&](int i) {
    os << '[';
    const auto& links = net.anchor_links[i];
    for (std::size_t t = 0; t < links.size(); ++t) {
      if (t) os << ", ";
      os << links[t];
    }
    os << ']';
  });
  os << ",\n";
  write_rows(os, "d", net.edge_count(), [&](int e) { os << format_double(doc.meas.d(e)); });
  os << ",\n";
  write_rows(os, "r", net.link_count(), [&](int l) { os << format_double(doc.meas.r(l)); });
  os << "\n}\n";
  return os.str();
}

void save_network(const std::string& path, const NetworkDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json(doc);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

const json& field(const std::string& origin, const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) fail(origin, std::string("missing field '") + name + "'");
  return *it;
}

double finite_number(const std::string& origin, const json& j, const std::string& where) {
  if (!j.is_number()) fail(origin, "field '" + where + "': expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(origin, "field '" + where + "': non-finite value");
  return v;
}

Eigen::VectorXd point(const std::string& origin, const json& j, int p,
                      const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != p)
    fail(origin, "field '" + where + "': expected an array of " + std::to_string(p) +
                     " coordinates");
  Eigen::VectorXd v(p);
  for (int c = 0; c < p; ++c)
    v(c) = finite_number(origin, j[c], where + "[" + std::to_string(c) + "]");
  return v;
}

}  // namespace

NetworkDocument from_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    fail(origin + ":" + std::to_string(line), e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  const int p = field(origin, j, "p").get<int>();
  const int n = field(origin, j, "n").get<int>();
  if (p < 2 || p > 3) fail(origin, "field 'p': must be 2 or 3");
  if (n < 1) fail(origin, "field 'n': must be >= 1");

  const json& jpos = field(origin, j, "positions");
  std::optional<Eigen::VectorXd> truth;
  if (!jpos.is_null()) {
    if (!jpos.is_array() || static_cast<int>(jpos.size()) != n)
      fail(origin, "field 'positions': expected " + std::to_string(n) + " rows or null");
    truth.emplace(static_cast<Eigen::Index>(n) * p);
    for (int i = 0; i < n; ++i)
      truth->segment(static_cast<Eigen::Index>(i) * p, p) =
          point(origin, jpos[i], p, "positions[" + std::to_string(i) + "]");
  }

  const json& jedges = field(origin, j, "edges");
  if (!jedges.is_array()) fail(origin, "field 'edges': expected an array");
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < jedges.size(); ++e) {
    const json& row = jedges[e];
    if (!row.is_array() || row.size() != 2)
      fail(origin, "field 'edges[" + std::to_string(e) + "]': expected a pair");
    edges.push_back({row[0].get<int>(), row[1].get<int>()});
  }

  const json& janch = field(origin, j, "anchors");
  if (!janch.is_array()) fail(origin, "field 'anchors': expected an array");
  std::vector<Eigen::VectorXd> anchors;
  for (std::size_t k = 0; k < janch.size(); ++k)
    anchors.push_back(point(origin, janch[k], p, "anchors[" + std::to_string(k) + "]"));

  const json& jlinks = field(origin, j, "anchor_links");
  if (!jlinks.is_array() || static_cast<int>(jlinks.size()) != n)
    fail(origin, "field 'anchor_links': expected " + std::to_string(n) + " rows");
  std::vector<std::vector<int>> anchor_links(n);
  for (int i = 0; i < n; ++i) {
    const json& row = jlinks[i];
    if (!row.is_array())
      fail(origin, "field 'anchor_links[" + std::to_string(i) + "]': expected an array");
    for (const json& v : row) anchor_links[i].push_back(v.get<int>());
  }

  NetworkDocument doc;
  try {
    doc.net = make_network(n, p, std::move(edges), std::move(anchors),
                           std::move(anchor_links), std::move(truth));
  } catch (const std::invalid_argument& e) {
    fail(origin, e.what());
  }

  const json& jd = field(origin, j, "d");
  if (!jd.is_array() || static_cast<int>(jd.size()) != doc.net.edge_count())
    fail(origin, "field 'd': expected one range per edge");
  doc.meas.d.resize(doc.net.edge_count());
  for (int e = 0; e < doc.net.edge_count(); ++e) {
    doc.meas.d(e) = finite_number(origin, jd[e], "d[" + std::to_string(e) + "]");
    if (doc.meas.d(e) < 0.0)
      fail(origin, "field 'd[" + std::to_string(e) + "]': negative range");
  }

  const json& jr = field(origin, j, "r");
  if (!jr.is_array() || static_cast<int>(jr.size()) != doc.net.link_count())
    fail(origin, "field 'r': expected one range per anchor link");
  doc.meas.r.resize(doc.net.link_count());
  for (int l = 0; l < doc.net.link_count(); ++l) {
    doc.meas.r(l) = finite_number(origin, jr[l], "r[" + std::to_string(l) + "]");
    if (doc.meas.r(l) < 0.0)
      fail(origin, "field 'r[" + std::to_string(l) + "]': negative range");
  }

  doc.meas.sigma = finite_number(origin, field(origin, j, "sigma"), "sigma");
  if (doc.meas.sigma < 0.0) fail(origin, "field 'sigma': must be >= 0");
  doc.seed = field(origin, j, "seed").get<std::uint64_t>();
  return doc;
}

NetworkDocument load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), path);
}

}  // namespace mmnetloc

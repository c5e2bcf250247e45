#include "targets.hpp"

#include <charconv>
#include <stdexcept>

#include "cga/io/model.hpp"

namespace cga::tools {

namespace {

using P = Point<double>;
using V3 = Eigen::Vector3d;

std::pair<std::string, std::vector<double>> split_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, {}};
  return {text.substr(0, colon), parse_numbers(text.substr(colon + 1))};
}

void expect(const std::string& kind, const std::vector<double>& v, std::size_t n) {
  if (v.size() != n)
    throw std::invalid_argument(kind + " target expects " + std::to_string(n) + " numbers, got " + std::to_string(v.size()));
}

V3 vec(const std::vector<double>& v, std::size_t at) { return V3(v[at], v[at + 1], v[at + 2]); }

}  // namespace

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw std::invalid_argument("'" + item + "' is not a number in '" + text + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

TargetSpec parse_target(const std::string& text) {
  const auto [kind, v] = split_spec(text);
  if (kind == "point") {
    expect(kind, v, 3);
    return optim::Target(P(vec(v, 0)));
  }
  if (kind == "pointpair") {
    expect(kind, v, 6);
    return optim::Target(PointPair<double>{P(vec(v, 0)), P(vec(v, 3))});
  }
  if (kind == "line") {
    expect(kind, v, 6);
    return optim::Target(Line<double>{P(vec(v, 0)), P(vec(v, 0) + vec(v, 3))});
  }
  if (kind == "circle") {
    expect(kind, v, 7);
    const V3 c = vec(v, 0), n = vec(v, 3);
    if (n.norm() < 1e-12) throw DegeneratePrimitive("circle normal has zero length");
    const V3 u = n.unitOrthogonal(), w = n.normalized().cross(u);
    const double r = v[6];
    return optim::Target(Circle<double>(P(c + r * u), P(c + r * w), P(c - r * u)));
  }
  if (kind == "plane") {
    expect(kind, v, 4);
    const V3 n = vec(v, 0);
    if (n.norm() < 1e-12) throw DegeneratePrimitive("plane normal has zero length");
    const V3 u = n.normalized(), a = u.unitOrthogonal(), b = u.cross(a);
    const V3 o = v[3] * u;
    return optim::Target(Plane<double>(P(o), P(o + a), P(o + b)));
  }
  if (kind == "sphere") {
    expect(kind, v, 4);
    const V3 c = vec(v, 0);
    const double r = v[3];
    return optim::Target(Sphere<double>(P(c + r * V3::UnitX()), P(c + r * V3::UnitY()), P(c - r * V3::UnitX()),
                                        P(c + r * V3::UnitZ())));
  }
  if (kind == "pose") {
    expect(kind, v, 6);
    return io::origin_motor(io::Origin{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
  }
  if (kind == "motor") {
    expect(kind, v, 8);
    return robot::MotorD(robot::MotorD::Base({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]}));
  }
  throw std::invalid_argument("unknown target kind '" + kind + "'");
}

optim::Tool parse_tool(const std::string& text) {
  const auto [kind, v] = split_spec(text);
  if (kind == "point") {
    if (v.empty()) return P::origin();
    expect("point tool", v, 3);
    return P(vec(v, 0));
  }
  if (kind == "line") {
    if (v.empty()) return Line<double>{P::origin(), P(V3::UnitZ())};
    expect("line tool", v, 6);
    return Line<double>{P(vec(v, 0)), P(vec(v, 0) + vec(v, 3))};
  }
  throw std::invalid_argument("unknown tool kind '" + kind + "'");
}

}  // namespace cga::tools

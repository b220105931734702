#include "fracbly/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracbly/error.hpp"

namespace fracbly {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInput(std::string("domain descriptor is missing \"") + key + "\"");
  }
  return j.at(key);
}

Point optional_point(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<Point>();
}

}  // namespace

Domain domain_from_json(const Json& j) {
  try {
    const auto kind = domain_kind_from_string(require(j, "kind").get<std::string>());
    switch (kind) {
      case DomainKind::box:
        return Domain::box(require(j, "edges").get<std::vector<double>>(), optional_point(j, "offset"));
      case DomainKind::disk:
        return Domain::disk(require(j, "radius").get<double>(), optional_point(j, "center"));
      case DomainKind::ball:
        return Domain::ball(require(j, "d").get<int>(), require(j, "radius").get<double>(),
                            optional_point(j, "center"));
      case DomainKind::polygon:
        return Domain::polygon(require(j, "vertices").get<std::vector<Point2>>(),
                               optional_point(j, "offset"));
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed domain descriptor: ") + e.what());
  }
  throw InvalidInput("unknown domain kind");
}

Json domain_to_json(const Domain& domain) {
  Json j;
  j["kind"] = to_string(domain.kind());
  switch (domain.kind()) {
    case DomainKind::box:
      j["edges"] = domain.edges();
      j["offset"] = domain.offset();
      break;
    case DomainKind::disk:
      j["radius"] = domain.radius();
      j["center"] = domain.offset();
      break;
    case DomainKind::ball:
      j["d"] = domain.dimension();
      j["radius"] = domain.radius();
      j["center"] = domain.offset();
      break;
    case DomainKind::polygon:
      j["vertices"] = domain.vertices();
      j["offset"] = domain.offset();
      break;
  }
  return j;
}

Json geometry_to_json(const GeometrySummary& g) {
  return Json{{"volume", g.volume},
              {"center_of_mass", g.center_of_mass},
              {"inertia", g.inertia},
              {"omega_d", g.omega_d},
              {"rearrangement_radius", g.rearrangement_radius},
              {"beta", g.beta},
              {"omega_cap", g.omega_cap}};
}

GeometrySummary geometry_from_json(const Json& j) {
  GeometrySummary g;
  g.volume = j.at("volume").get<double>();
  g.center_of_mass = j.at("center_of_mass").get<Point>();
  g.inertia = j.at("inertia").get<double>();
  g.omega_d = j.at("omega_d").get<double>();
  g.rearrangement_radius = j.at("rearrangement_radius").get<double>();
  g.beta = j.at("beta").get<double>();
  g.omega_cap = j.at("omega_cap").get<double>();
  return g;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
  if (!os.flush()) throw IoError("failed writing " + path.string());
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace fracbly

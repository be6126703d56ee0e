#include "reebfol/profile_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "reebfol/error.hpp"

namespace reebfol {

namespace {

void put_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  // Keep the value recognisably floating point on re-read.
  const std::string_view s(buf);
  if (s.find_first_of(".eEn") == std::string_view::npos) out += ".0";
}

void put_indent(std::string& out, int indent, int depth) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void dump_into(std::string& out, const Json& j, int indent, int depth) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        put_indent(out, indent, depth + 1);
        out += Json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        dump_into(out, it.value(), indent, depth + 1);
      }
      put_indent(out, indent, depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j)
        if (v.is_structured()) flat = false;
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) put_indent(out, indent, depth + 1);
        dump_into(out, v, indent, depth + 1);
      }
      if (!flat) put_indent(out, indent, depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      put_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

[[noreturn]] void bad_input(const std::string& msg) { throw Error(ErrorCode::Input, msg); }

Coeffs read_coeffs(const Json& seg, const char* key, std::size_t index) {
  if (!seg.contains(key) || !seg[key].is_array())
    bad_input("segment " + std::to_string(index) + ": missing coefficient list '" + key + "'");
  Coeffs c;
  for (const auto& v : seg[key]) {
    if (!v.is_number()) bad_input("segment " + std::to_string(index) + ": non-numeric coefficient");
    c.push_back(v.get<double>());
  }
  return c;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

Json profile_to_json(const Profile& profile) {
  Json j;
  j["schema"] = "reebfol.profile";
  j["version"] = kProfileSchemaVersion;
  j["conventions"] = {{"theta", "R/Z"}, {"phi", "R/2piZ"}};
  j["rho_max"] = profile.rho_max();
  Json segs = Json::array();
  for (const Segment& s : profile.segments()) {
    segs.push_back({{"interval", {s.lo(), s.hi()}},
                    {"f", s.global(Channel::F)},
                    {"g", s.global(Channel::G)},
                    {"beta", s.global(Channel::Beta)}});
  }
  j["segments"] = segs;
  return j;
}

Profile profile_from_json(const Json& j) {
  if (!j.is_object()) bad_input("profile document must be a JSON object");
  if (!j.contains("segments") || !j["segments"].is_array())
    bad_input("profile document needs a 'segments' array");
  if (j.contains("version") && (!j["version"].is_number_integer() ||
                                j["version"].get<int>() > kProfileSchemaVersion))
    bad_input("unsupported profile schema version");
  std::vector<SegmentData> data;
  std::size_t index = 0;
  for (const auto& seg : j["segments"]) {
    if (!seg.is_object()) bad_input("segment " + std::to_string(index) + " must be an object");
    if (!seg.contains("interval") || !seg["interval"].is_array() || seg["interval"].size() != 2 ||
        !seg["interval"][0].is_number() || !seg["interval"][1].is_number())
      bad_input("segment " + std::to_string(index) + ": 'interval' must be [a, b]");
    SegmentData d;
    d.lo = seg["interval"][0].get<double>();
    d.hi = seg["interval"][1].get<double>();
    d.f = read_coeffs(seg, "f", index);
    d.g = read_coeffs(seg, "g", index);
    d.beta = read_coeffs(seg, "beta", index);
    data.push_back(std::move(d));
    ++index;
  }
  Profile profile(std::move(data));
  if (j.contains("rho_max")) {
    if (!j["rho_max"].is_number()) bad_input("'rho_max' must be a number");
    const double rm = j["rho_max"].get<double>();
    if (std::abs(rm - profile.rho_max()) > 1e-12 * std::max(1.0, rm))
      throw Error(ErrorCode::Structural, "rho_max does not match the last segment");
  }
  return profile;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    bad_input(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad_input("cannot write " + path.string());
  out << text;
  if (!out) bad_input("write failed for " + path.string());
}

Profile load_profile(const std::filesystem::path& path) {
  return profile_from_json(read_json_file(path));
}

void save_profile(const std::filesystem::path& path, const Profile& profile) {
  write_text_file(path, dump_json(profile_to_json(profile)));
}

}  // namespace reebfol

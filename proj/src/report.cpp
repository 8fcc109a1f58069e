#include "gptlab/report.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gptlab {

namespace {

Error parse_error(const std::string& what) { return Error(ErrorCode::ParseError, what); }

ScalarMode parse_mode(const Json& j) {
  if (!j.is_string()) throw parse_error("scalar_mode must be a string");
  const auto text = j.get<std::string>();
  if (text == "exact") return ScalarMode::exact;
  if (text == "float") return ScalarMode::floating;
  throw parse_error("unknown scalar_mode '" + text + "'");
}

const char* param_key(SystemKind kind) {
  switch (kind) {
    case SystemKind::classical:
    case SystemKind::polygon: return "n";
    case SystemKind::cube:
    case SystemKind::octoplex: return "d";
    default: return nullptr;
  }
}

int catalog_parameter(const SystemDescriptor& d) {
  const char* key = param_key(*d.kind);
  if (!key) return 0;
  if (!d.params.contains(key) || !d.params.at(key).is_number_integer()) {
    throw parse_error(fmt::format("catalog kind '{}' needs integer parameter '{}'", to_string(*d.kind), key));
  }
  return d.params.at(key).get<int>();
}

template <class F>
Json vec_to_json(const Vec<F>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

template <class F>
Vec<F> vec_from_json(const Json& j, std::size_t dim, const char* what) {
  if (!j.is_array() || j.size() != dim) throw parse_error(fmt::format("{} must be an array of length {}", what, dim));
  Vec<F> out;
  for (const auto& x : j) out.push_back(scalar_from_json<F>(x));
  return out;
}

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_into(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParameter, "non-finite number in report");
      std::string text = fmt::format("{:.17g}", x);
      if (text.find_first_of(".e") == std::string::npos) text += ".0";
      out += text;
      break;
    }
    default: out += j.dump(); break;
  }
}

template <class F>
std::vector<std::string> tuple_names(const CompositeSystem<F>& c) {
  std::vector<std::vector<std::string>> local;
  for (const auto& l : c.locals) local.push_back(ray_names(l));
  std::vector<std::string> out;
  for (const auto& t : c.tuples) {
    std::string name;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k) name += "⊗";
      name += local[k][t[k]];
    }
    out.push_back(std::move(name));
  }
  return out;
}

template <class F>
std::optional<TrivialityCertificate<F>> safe_certificate(const CompositeSystem<F>& c, const Transformation<F>& t) {
  try {
    return triviality_certificate(c, t);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CertificateVerificationFailed) return std::nullopt;
    throw;
  }
}

template <class F>
Json audit_to_json(const AuditReport<F>& a) {
  Json out;
  out["permutes_product_states"] = a.permutes_product_states;
  out["separable_to_entangled"] = a.separable_to_entangled;
  out["violating_state"] = a.violating_state ? Json(*a.violating_state) : Json();
  out["entangled_image_of"] = a.entangled_image_of ? Json(*a.entangled_image_of) : Json();
  out["correlated_input"] = a.correlated_input ? vec_to_json(*a.correlated_input) : Json();
  out["correlated_output"] = a.correlated_output ? vec_to_json(*a.correlated_output) : Json();
  out["mixed_slot"] = a.mixed_slot;
  return out;
}

}  // namespace

template <>
Json scalar_to_json<Rational>(const Rational& x) {
  return x.get_str();
}

template <>
Json scalar_to_json<double>(const double& x) {
  return x;
}

template <>
Rational scalar_from_json<Rational>(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw parse_error("exact scalars must be \"p/q\" strings or integers");
  const auto text = j.get<std::string>();
  Rational q;
  try {
    q = Rational(text, 10);
  } catch (const std::invalid_argument&) {
    throw parse_error("malformed rational '" + text + "'");
  }
  if (sgn(q.get_den()) == 0) throw parse_error("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

template <>
double scalar_from_json<double>(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    if (text.find('/') != std::string::npos) return scalar_from_json<Rational>(j).get_d();
    try {
      std::size_t used = 0;
      const double x = std::stod(text, &used);
      if (used == text.size()) return x;
    } catch (const std::exception&) {
    }
    throw parse_error("malformed scalar '" + text + "'");
  }
  throw parse_error("scalars must be numbers or strings");
}

SystemDescriptor parse_system_descriptor(const Json& j) {
  if (!j.is_object()) throw parse_error("system descriptor must be an object");
  try {
    SystemDescriptor d;
    d.name = j.value("name", std::string("system"));
    if (j.contains("scalar_mode")) d.scalar_mode = parse_mode(j.at("scalar_mode"));
    if (j.contains("kind")) {
      const auto kind = parse_system_kind(j.at("kind").get<std::string>());
      if (!kind) throw parse_error("unknown kind '" + j.at("kind").get<std::string>() + "'");
      d.kind = kind;
    }
    if (j.contains("params")) {
      if (!j.at("params").is_object()) throw parse_error("params must be an object");
      d.params = j.at("params");
    }
    if (j.contains("ray_extremes")) {
      d.dim = j.at("dim").get<std::size_t>();
      d.unit = j.at("unit");
      d.ray_extremes = j.at("ray_extremes");
      if (!d.ray_extremes.is_array()) throw parse_error("ray_extremes must be an array");
    } else if (!d.is_catalog()) {
      throw parse_error("descriptor needs a catalog kind or explicit ray_extremes");
    }
    if (d.is_catalog()) catalog_parameter(d);
    return d;
  } catch (const Json::exception& e) {
    throw parse_error(e.what());
  }
}

Json to_json(const SystemDescriptor& d) {
  Json j;
  j["name"] = d.name;
  j["scalar_mode"] = std::string(to_string(d.scalar_mode));
  if (d.kind) {
    j["kind"] = std::string(to_string(*d.kind));
    j["params"] = d.params;
  }
  if (!d.ray_extremes.empty()) {
    j["dim"] = d.dim;
    j["unit"] = d.unit;
    j["ray_extremes"] = d.ray_extremes;
  }
  return j;
}

CompositeDescriptor make_composite_descriptor(const std::vector<SystemDescriptor>& parts) {
  if (parts.empty()) throw Error(ErrorCode::TooSmall, "composite needs at least one component");
  CompositeDescriptor out;
  out.scalar_mode = parts.front().scalar_mode;
  for (const auto& p : parts) {
    if (p.scalar_mode != out.scalar_mode) {
      throw Error(ErrorCode::MixedScalarMode, "components mix exact and float scalars");
    }
    if (!out.name.empty()) out.name += "⊗";
    out.name += p.name;
  }
  out.components = parts;
  return out;
}

CompositeDescriptor parse_composite_descriptor(const Json& j) {
  if (!j.is_object() || !j.contains("components") || !j.at("components").is_array()) {
    throw parse_error("composite descriptor needs a components array");
  }
  std::vector<SystemDescriptor> parts;
  for (const auto& c : j.at("components")) parts.push_back(parse_system_descriptor(c));
  auto out = make_composite_descriptor(parts);
  if (j.contains("scalar_mode") && parse_mode(j.at("scalar_mode")) != out.scalar_mode) {
    throw Error(ErrorCode::MixedScalarMode, "composite scalar_mode differs from its components");
  }
  if (j.contains("name") && j.at("name").is_string()) out.name = j.at("name").get<std::string>();
  return out;
}

Json to_json(const CompositeDescriptor& d) {
  Json j;
  j["name"] = d.name;
  j["scalar_mode"] = std::string(to_string(d.scalar_mode));
  j["components"] = Json::array();
  for (const auto& c : d.components) j["components"].push_back(to_json(c));
  return j;
}

SystemDescriptor catalog_descriptor(SystemKind kind, int parameter, ScalarMode mode) {
  SystemDescriptor d;
  d.kind = kind;
  d.scalar_mode = kind == SystemKind::polygon ? ScalarMode::floating : mode;
  if (const char* key = param_key(kind)) {
    d.params[key] = parameter;
    d.name = fmt::format("{}-{}", to_string(kind), parameter);
  } else {
    d.name = std::string(to_string(kind));
  }
  return d;
}

template <class F>
LocalSystem<F> instantiate(const SystemDescriptor& d) {
  if (d.scalar_mode != Field<F>::mode) throw Error(ErrorCode::MixedScalarMode, "descriptor scalar mode differs");
  if (d.is_catalog()) {
    const int p = catalog_parameter(d);
    LocalSystem<F> s;
    switch (*d.kind) {
      case SystemKind::classical: s = build_classical<F>(p); break;
      case SystemKind::cube: s = build_cube<F>(p); break;
      case SystemKind::octoplex: s = build_octoplex<F>(p); break;
      case SystemKind::squashed_gtrit: s = build_squashed_gtrit<F>(); break;
      case SystemKind::polygon:
        if constexpr (std::is_same_v<F, double>) {
          s = build_polygon(p);
        } else {
          throw Error(ErrorCode::InvalidParameter, "polygons exist in float mode only");
        }
        break;
      default: break;
    }
    if (!d.name.empty()) s.name = d.name;
    return s;
  }
  const Vec<F> unit = vec_from_json<F>(d.unit, d.dim, "unit");
  std::vector<Vec<F>> rays;
  for (const auto& r : d.ray_extremes) rays.push_back(vec_from_json<F>(r, d.dim, "ray_extremes entry"));
  return make_system<F>(d.name, unit, rays);
}

template <class F>
SystemDescriptor describe(const LocalSystem<F>& s) {
  SystemDescriptor d;
  d.name = s.name;
  d.scalar_mode = Field<F>::mode;
  if (s.kind != SystemKind::custom) {
    d.kind = s.kind;
    if (const char* key = param_key(s.kind)) d.params[key] = s.parameter;
  }
  d.dim = s.dim;
  d.unit = vec_to_json(s.unit);
  for (const auto& r : s.ray_extremes) d.ray_extremes.push_back(vec_to_json(r));
  return d;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw parse_error(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

Json to_json(const AnalysisReport& r) {
  Json j;
  j["tool_version"] = r.tool_version;
  j["input_hash"] = r.input_hash;
  j["analysis"] = r.analysis;
  j["scalar_mode"] = r.scalar_mode;
  j["status"] = r.status;
  j["results"] = r.results;
  if (r.timings) j["timings"] = *r.timings;
  return j;
}

AnalysisReport report_from_json(const Json& j) {
  try {
    AnalysisReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.input_hash = j.at("input_hash").get<std::string>();
    r.analysis = j.at("analysis").get<std::string>();
    r.scalar_mode = j.at("scalar_mode").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.results = j.at("results");
    if (j.contains("timings")) r.timings = j.at("timings");
    return r;
  } catch (const Json::exception& e) {
    throw parse_error(e.what());
  }
}

void write_report(const std::string& path, const AnalysisReport& r) {
  write_text_file(path, canonical_dump(to_json(r)) + "\n");
}

AnalysisReport read_report(const std::string& path) { return report_from_json(read_json_file(path)); }

std::string render_report(const AnalysisReport& r) {
  std::string out = fmt::format("{} [{}] status={} input={}\n", r.analysis, r.scalar_mode, r.status,
                                r.input_hash.substr(0, 16));
  for (auto it = r.results.begin(); it != r.results.end(); ++it) {
    std::string value = canonical_dump(it.value());
    if (value.size() > 160) value = value.substr(0, 157) + "...";
    out += fmt::format("  {}: {}\n", it.key(), value);
  }
  if (r.timings) out += fmt::format("  timings: {}\n", canonical_dump(*r.timings));
  return out;
}

template <class F>
std::vector<std::string> ray_names(const LocalSystem<F>& s) {
  if (s.kind == SystemKind::squashed_gtrit && s.ray_count() == 5) return {"X", "Y0", "Y1", "Z0", "Z1"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.ray_count(); ++i) out.push_back(fmt::format("e{}", i + 1));
  return out;
}

template <class F>
Json system_summary(const LocalSystem<F>& s, const SearchConfig& cfg) {
  Json out;
  out["name"] = s.name;
  out["dim"] = s.dim;
  out["ray_count"] = s.ray_count();
  out["pure_state_count"] = s.pure_states.size();
  const auto report = validate_system(s);
  Json checks = Json::object();
  for (const auto& c : report.checks) checks[c.name] = {{"passed", c.passed}, {"witness", c.witness}};
  out["validation"] = checks;
  out["valid"] = report.ok();
  if (!report.ok()) return out;
  out["dichotomic"] = is_dichotomic(s);
  const auto dec = reduce(s);
  Json comps = Json::array();
  for (const auto& c : dec.components) comps.push_back(c.ray_indices);
  out["components"] = comps;
  out["component_count"] = dec.components.size();
  out["reducible"] = dec.components.size() > 1;
  out["brute_force_checked"] = dec.brute_force_checked;
  out["symmetry_group_order"] = local_symmetry_group(s, cfg).size();
  return out;
}

template <class F>
Json analyze_theorem1(const CompositeSystem<F>& c, const SearchConfig& cfg) {
  const auto r = verify_theorem1(c, cfg);
  Json out;
  out["reversibles"] = r.enumerated;
  out["trivial"] = r.certified;
  out["trivial_group_order"] = r.trivial_group_order;
  out["local_group_orders"] = r.local_group_orders;
  out["equivalence_classes"] = r.equivalence_classes;
  out["subunit_checks"] = r.subunit_checks;
  out["proof_path_failures"] = r.proof_path_failures;
  out["factor_checks"] = r.factor_checks;
  out["factor_failures"] = r.factor_failures;
  out["pass"] = r.pass;
  return out;
}

template <class F>
Json analyze_enumerate(const CompositeSystem<F>& c, const SearchConfig& cfg) {
  const auto maps = enumerate_reversibles(c, cfg);
  std::size_t certified = 0, subunit = 0, discrepancies = 0, permuting = 0;
  Json per_map = Json::array();
  for (const auto& t : maps) {
    const bool cert = safe_certificate(c, t).has_value();
    const bool sub = subunit_criterion(c, t);
    const bool perm = entanglement_audit(c, t).permutes_product_states;
    certified += cert;
    subunit += sub;
    discrepancies += cert != sub;
    permuting += perm;
    per_map.push_back(t.ray_image);
  }
  Json out;
  out["reversibles"] = maps.size();
  out["certified_trivial"] = certified;
  out["subunit_criterion_true"] = subunit;
  out["criterion_discrepancies"] = discrepancies;
  out["permute_pure_product_states"] = permuting;
  out["product_state_note"] = permuting == maps.size()
                                  ? "every enumerated reversible permutes the pure product states (evidence only)"
                                  : "some enumerated reversible does not permute the pure product states";
  out["ray_images"] = per_map;
  return out;
}

template <class F>
Json analyze_cnot(const CompositeSystem<F>& c, std::size_t control, std::size_t target, bool audit,
                  const SearchConfig& cfg) {
  if (target < 1 || target > c.subsystem_count()) throw Error(ErrorCode::IndexOutOfRange, "target index");
  const Matrix<F> t_local = default_conditional_symmetry(c.locals[target - 1], cfg);
  const auto t = build_conditional_cnot(c, control, target, t_local);
  Json out;
  out["control"] = control;
  out["target"] = target;
  const bool allowed = is_allowed_reversible(c, t);
  out["allowed_reversible"] = allowed;
  if (!allowed) return out;
  out["adjacency_preserving"] = is_adjacency_preserving(c, t);
  out["subunit_criterion"] = subunit_criterion(c, t);
  out["certified_trivial"] = safe_certificate(c, t).has_value();
  const auto names = tuple_names(c);
  Json table = Json::array();
  std::size_t moved = 0;
  for (std::size_t j = 0; j < names.size(); ++j) {
    const std::size_t to = t.ray_image[j];
    moved += to != j;
    table.push_back({{"from", names[j]}, {"to", names[to]}});
  }
  out["map"] = table;
  out["moved_rays"] = moved;
  if (audit) out["audit"] = audit_to_json(entanglement_audit(c, t));
  return out;
}

template <class F>
Json analyze_audit(const CompositeSystem<F>& c, const SearchConfig& cfg) {
  const auto maps = enumerate_reversibles(c, cfg);
  std::size_t permuting = 0, entangling = 0, correlating = 0;
  for (const auto& t : maps) {
    const auto a = entanglement_audit(c, t);
    permuting += a.permutes_product_states;
    entangling += a.separable_to_entangled;
    correlating += a.correlated_input.has_value();
  }
  Json out;
  out["reversibles"] = maps.size();
  out["permute_pure_product_states"] = permuting;
  out["create_entanglement"] = entangling;
  out["create_classical_correlation"] = correlating;
  return out;
}

Json analyze_polygon_frames(const CompositeSystem<double>& c, const SearchConfig& cfg) {
  const int n = c.locals.front().parameter;
  for (const auto& l : c.locals) {
    if (l.kind != SystemKind::polygon || l.parameter != n || n % 2 == 0) {
      throw Error(ErrorCode::InvalidParameter, "appendix analysis needs identical odd polygons");
    }
  }
  const auto frame = polygon_frame(n);
  const std::vector<PolygonFrame> frames(c.subsystem_count(), frame);
  const auto maps = enumerate_reversibles(c, cfg);
  std::size_t orthogonal = 0, certified = 0, argument_passed = 0;
  double worst = 0.0;
  Json failures = Json::object();
  for (const auto& t : maps) {
    const auto o = orthogonality_check(c, frames, t);
    orthogonal += o.orthogonal && o.gram_preserved;
    worst = std::max(worst, o.deviation);
    certified += safe_certificate(c, t).has_value();
    const auto r = odd_polygon_triviality_check(c, t);
    if (r.passed()) {
      ++argument_passed;
    } else {
      failures[*r.failed_step] = failures.value(*r.failed_step, 0) + 1;
    }
  }
  Json out;
  out["n"] = n;
  out["reversibles"] = maps.size();
  out["orthogonal"] = orthogonal;
  out["max_orthogonality_deviation"] = worst;
  out["certified_trivial"] = certified;
  out["argument_passed"] = argument_passed;
  out["argument_failures"] = failures;
  out["frame_identity_deviation"] = frame_identity_deviation(frame);
  out["composite_frame_identity_deviation"] = frame_identity_deviation(frames);
  out["orthogonality_pass"] = orthogonal == maps.size();
  out["triviality_pass"] = certified == maps.size() && argument_passed == maps.size();
  return out;
}

#define GPTLAB_INSTANTIATE_REPORT(F)                                                                     \
  template LocalSystem<F> instantiate<F>(const SystemDescriptor&);                                      \
  template SystemDescriptor describe<F>(const LocalSystem<F>&);                                         \
  template std::vector<std::string> ray_names<F>(const LocalSystem<F>&);                                \
  template Json system_summary<F>(const LocalSystem<F>&, const SearchConfig&);                          \
  template Json analyze_theorem1<F>(const CompositeSystem<F>&, const SearchConfig&);                    \
  template Json analyze_enumerate<F>(const CompositeSystem<F>&, const SearchConfig&);                   \
  template Json analyze_cnot<F>(const CompositeSystem<F>&, std::size_t, std::size_t, bool, const SearchConfig&); \
  template Json analyze_audit<F>(const CompositeSystem<F>&, const SearchConfig&);

GPTLAB_INSTANTIATE_REPORT(Rational)
GPTLAB_INSTANTIATE_REPORT(double)

}  // namespace gptlab

#pragma once

// System descriptors, canonical JSON and the analysis pipelines behind the CLI.

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

#include "gptlab/polygon.hpp"

namespace gptlab {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "gptlab 0.1.0";

/// Catalog reference or explicit coordinates. Explicit scalars are kept as
/// JSON values ("p/q" strings or numbers) until instantiation.
struct SystemDescriptor {
  std::string name;
  ScalarMode scalar_mode = ScalarMode::exact;
  std::optional<SystemKind> kind;  // set for catalog systems
  Json params = Json::object();
  std::size_t dim = 0;
  Json unit = Json::array();
  Json ray_extremes = Json::array();

  bool is_catalog() const { return kind.has_value() && *kind != SystemKind::custom; }
};

struct CompositeDescriptor {
  std::string name;
  ScalarMode scalar_mode = ScalarMode::exact;
  std::vector<SystemDescriptor> components;
};

SystemDescriptor parse_system_descriptor(const Json& j);
Json to_json(const SystemDescriptor& d);

/// Throws MixedScalarMode if the components disagree on scalar mode.
CompositeDescriptor make_composite_descriptor(const std::vector<SystemDescriptor>& parts);
CompositeDescriptor parse_composite_descriptor(const Json& j);
Json to_json(const CompositeDescriptor& d);

/// Catalog descriptor for a builder call; polygons force float mode.
SystemDescriptor catalog_descriptor(SystemKind kind, int parameter, ScalarMode mode);

template <class F>
LocalSystem<F> instantiate(const SystemDescriptor& d);

/// Explicit descriptor carrying the system's coordinates (plus its catalog reference if any).
template <class F>
SystemDescriptor describe(const LocalSystem<F>& s);

template <class F>
Json scalar_to_json(const F& x);

/// Accepts "p/q" strings, integers, and (float mode only) JSON numbers.
template <class F>
F scalar_from_json(const Json& j);

template <>
Json scalar_to_json<Rational>(const Rational& x);
template <>
Json scalar_to_json<double>(const double& x);
template <>
Rational scalar_from_json<Rational>(const Json& j);
template <>
double scalar_from_json<double>(const Json& j);

/// Sorted keys, no whitespace, floats printed with 17 significant digits.
std::string canonical_dump(const Json& j);
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string sha256_hex(const std::string& data);

struct AnalysisReport {
  std::string tool_version = kToolVersion;
  std::string input_hash;
  std::string analysis;
  std::string scalar_mode;
  std::string status = "ok";  // ok | failed | budget_exceeded
  Json results = Json::object();
  std::optional<Json> timings;

  bool passed() const { return status == "ok"; }
};

Json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const Json& j);
void write_report(const std::string& path, const AnalysisReport& r);
AnalysisReport read_report(const std::string& path);
/// Short human-readable rendering of a report.
std::string render_report(const AnalysisReport& r);

/// Ray names used in reports: X, Y0, ... for the squashed g-trit, e1, e2, ... otherwise.
template <class F>
std::vector<std::string> ray_names(const LocalSystem<F>& s);

template <class F>
Json system_summary(const LocalSystem<F>& s, const SearchConfig& cfg = {});

template <class F>
Json analyze_theorem1(const CompositeSystem<F>& c, const SearchConfig& cfg = {});

template <class F>
Json analyze_enumerate(const CompositeSystem<F>& c, const SearchConfig& cfg = {});

/// The target acts by default_conditional_symmetry.
template <class F>
Json analyze_cnot(const CompositeSystem<F>& c, std::size_t control, std::size_t target, bool audit,
                  const SearchConfig& cfg = {});

template <class F>
Json analyze_audit(const CompositeSystem<F>& c, const SearchConfig& cfg = {});

/// Float-mode polygon composites only.
Json analyze_polygon_frames(const CompositeSystem<double>& c, const SearchConfig& cfg = {});

}  // namespace gptlab

#pragma once

// File formats: configurations, schedules and certificates as JSON, traces
// and histories as CSV.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gordian/clearance.hpp"
#include "gordian/config.hpp"
#include "gordian/linkmodel.hpp"
#include "gordian/morph.hpp"
#include "gordian/pimap.hpp"
#include "gordian/relax.hpp"
#include "gordian/tightbuild.hpp"

namespace gordian {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kConfigFormat = "gordian-configuration";
inline constexpr std::string_view kScheduleFormat = "gordian-schedule";
inline constexpr int kFormatVersion = 1;

/// "a+b*pi" when a curve's length is a + b*pi with a and 2b integers, which
/// holds for unit-radius tight-family curves.
std::optional<std::string> exact_length_tag(const ComponentGeometry& g);

Json blueprint_to_json(const LinkBlueprint& bp);
Json config_to_json(const LinkConfiguration& config);
std::string serialize_config(const LinkConfiguration& config);

/// Parses text in the configuration format. Syntax and schema errors throw
/// ErrorKind::Parse with the section path where reading stopped, e.g.
/// "blueprint.edges[3]". Geometry is not validated here.
LinkConfiguration parse_config(std::string_view text);

/// A blueprint alone, either a configuration file or {"blueprint": ...}.
LinkBlueprint parse_blueprint(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// parse_config on a file; then ErrorKind::Validation if any component's
/// geometry is malformed.
LinkConfiguration load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const LinkConfiguration& config);

Json schedule_to_json(const MorphSchedule& schedule);
MorphSchedule parse_schedule(std::string_view text);

Json tightness_to_json(const TightnessCertificate& cert);
Json certificate_to_json(const GordianCertificate& cert);

struct MeasureReport {
  std::vector<std::string> labels;
  std::vector<double> lengths;
  double totalLength = 0.0;
  std::optional<ClearanceReport> clearance;
  std::optional<double> gehringRopelength;
  std::optional<LinkingMatrix> linking;
};

MeasureReport measure(const LinkConfiguration& config, double max_chord_error = 2.5e-7,
                      std::size_t linking_vertices = 512);
Json measure_to_json(const MeasureReport& report);

/// iteration,totalLength
void write_history_csv(std::ostream& out, const RelaxReport& report);
/// time,totalLength,clearance,linkingOk
void write_trace_csv(std::ostream& out, const MorphTrace& trace);

}  // namespace gordian

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gordian/clearance.hpp"
#include "gordian/error.hpp"
#include "gordian/io.hpp"
#include "gordian/linkmodel.hpp"
#include "gordian/mesh.hpp"
#include "gordian/morph.hpp"
#include "gordian/pimap.hpp"
#include "gordian/relax.hpp"
#include "gordian/tightbuild.hpp"

namespace fs = std::filesystem;
using namespace gordian;

namespace {

constexpr const char* kOutDirEnv = "GORDIAN_OUT_DIR";

fs::path output_path(const std::string& given, const std::string& fallback_name) {
  if (!given.empty()) return given;
  const char* dir = std::getenv(kOutDirEnv);
  return fs::path(dir && *dir ? dir : ".") / fallback_name;
}

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

bool is_builtin(const std::string& name) {
  return name == "R" || name == "W" || name == "star" || name == "hopf2";
}

LinkConfiguration build_builtin(const std::string& name, std::optional<double> theta) {
  const ModuliPoint m(theta.value_or(kPi / 2));
  LinkConfiguration config;
  if (name == "R") {
    config = build_tight(default_blueprint(), rotor_order(), m);
  } else if (name == "W") {
    config = build_tight(default_blueprint(), wing_order(), m);
  } else if (name == "star") {
    config = build_tight(star_blueprint(), {"P1", "P2", "P3", "P4"}, m);
  } else if (name == "hopf2") {
    if (theta) fail(ErrorKind::Domain, "hopf2 has no rhombus angle");
    config = build_hopf_pair();
  } else {
    fail(ErrorKind::Domain, "unknown builtin configuration '" + name + "'");
  }
  config.metadata.name = name;
  return config;
}

// A path, or a builtin name when no such file exists.
LinkConfiguration load_input(const std::string& arg) {
  if (is_builtin(arg) && !fs::exists(arg)) return build_builtin(arg, std::nullopt);
  return load_config(arg);
}

std::string stem_of(const std::string& arg) {
  return is_builtin(arg) && !fs::exists(arg) ? arg : fs::path(arg).stem().string();
}

void print_summary(const LinkConfiguration& config) {
  const auto r = measure(config);
  std::cout << std::setprecision(10);
  std::cout << "total length " << r.totalLength;
  if (const auto tag = config_to_json(config)["metadata"]["lengths"]["total"];
      tag.contains("exact"))
    std::cout << " (" << tag["exact"].get<std::string>() << ")";
  std::cout << "\n";
  if (r.clearance)
    std::cout << "clearance " << r.clearance->globalMin << " (+-" << r.clearance->errorBound
              << ", " << r.clearance->argmin.labelA << "-" << r.clearance->argmin.labelB << ")\n";
}

// --- subcommands -----------------------------------------------------------

struct BuildArgs {
  std::string source;
  std::optional<double> theta;
  std::string order;
  std::string out;
};

int cmd_build(const BuildArgs& a) {
  LinkConfiguration config;
  if (is_builtin(a.source) && !fs::exists(a.source)) {
    if (!a.order.empty()) {
      if (a.source == "hopf2") fail(ErrorKind::Domain, "hopf2 takes no ear order");
      const auto bp = a.source == "star" ? star_blueprint() : default_blueprint();
      config = build_tight(bp, split_labels(a.order), ModuliPoint(a.theta.value_or(kPi / 2)));
      config.metadata.name = a.source;
    } else {
      config = build_builtin(a.source, a.theta);
    }
  } else {
    if (a.order.empty()) fail(ErrorKind::Domain, "building from a blueprint file needs --order");
    const auto bp = parse_blueprint(read_file(a.source));
    config = build_tight(bp, split_labels(a.order), ModuliPoint(a.theta.value_or(kPi / 2)));
    config.metadata.name = fs::path(a.source).stem().string();
  }
  const auto path = output_path(a.out, config.metadata.name + ".json");
  save_config(path, config);
  std::cout << "wrote " << path.string() << "\n";
  print_summary(config);
  return exit_code::kOk;
}

int cmd_measure(const std::string& input, bool as_json) {
  const auto config = load_input(input);
  const auto r = measure(config);
  if (as_json) {
    std::cout << measure_to_json(r).dump(2) << "\n";
    return exit_code::kOk;
  }
  std::cout << std::setprecision(12);
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    std::cout << std::left << std::setw(8) << r.labels[i] << r.lengths[i] << "\n";
  std::cout << "total   " << r.totalLength << "\n";
  if (r.clearance) {
    std::cout << "clearance " << r.clearance->globalMin << " +- " << r.clearance->errorBound << " ("
              << r.clearance->argmin.labelA << "-" << r.clearance->argmin.labelB << ")\n";
    if (r.gehringRopelength) std::cout << "gehring ropelength " << *r.gehringRopelength << "\n";
  }
  if (r.linking) {
    std::cout << "linking matrix (" << r.labels.size() << " components, max residual "
              << r.linking->maxResidual << ")\n"
              << r.linking->values << "\n";
  } else if (config.blueprint.size() >= 2) {
    std::cout << "linking matrix: ill-conditioned (components nearly touch)\n";
  }
  return exit_code::kOk;
}

int cmd_classify(const std::string& input, double planarity) {
  const auto config = load_input(input);
  PiMapOptions opts;
  opts.planarityTol = planarity;
  const auto points = pi_map(config, opts);
  std::cout << std::setprecision(12);
  for (const auto& p : points.entries()) std::cout << p.label << " " << p.s << "\n";
  if (is_exact(config.at(*config.blueprint.central_label()))) {
    const auto arcs = on_arc_check(config, opts);
    std::cout << "on arcs: " << (arcs.ok ? "yes" : "no") << "\n";
  }
  const auto cls = dihedral_classify(points, blueprint_automorphisms(config.blueprint), &config.blueprint);
  std::cout << "class " << cls.str() << "\n";
  return exit_code::kOk;
}

int cmd_certify(const std::string& first, const std::string& second, const std::string& out) {
  const auto a = load_input(first);
  if (second.empty()) {
    const auto cert = certify_tight(a);
    auto doc = tightness_to_json(cert);
    doc["input"] = first;
    const auto path = output_path(out, stem_of(first) + ".tightness.json");
    write_file(path, doc.dump(2) + "\n");
    std::cout << to_string(cert.verdict) << "\n";
    for (const auto& note : cert.notes) std::cout << "  " << note << "\n";
    return cert.verdict == TightnessVerdict::GloballyMinimal ? exit_code::kOk
                                                             : exit_code::kNegativeVerdict;
  }
  const auto b = load_input(second);
  const auto cert = gordian_certify(a, b);
  auto doc = certificate_to_json(cert);
  doc["inputs"] = {first, second};
  const auto path = output_path(out, stem_of(first) + "_" + stem_of(second) + ".certificate.json");
  write_file(path, doc.dump(2) + "\n");
  std::cout << to_string(cert.verdict) << "\n";
  for (const auto& r : cert.reasons) std::cout << "  " << r << "\n";
  std::cout << "certificate " << path.string() << "\n";
  return cert.verdict == GordianVerdict::Gordian ? exit_code::kOk : exit_code::kNegativeVerdict;
}

struct RelaxArgs {
  std::string input;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  RelaxParams params;
  std::string out;
  std::string history;
};

int cmd_relax(const RelaxArgs& a) {
  const auto start = load_input(a.input);
  const auto perturbed = perturb(start, a.sigma, a.seed, a.params.verticesPerComponent);
  const auto result = relax(perturbed, a.params);
  const auto& r = result.report;
  const auto stem = stem_of(a.input);
  const auto config_path = output_path(a.out, stem + ".relaxed.json");
  save_config(config_path, result.config);
  const auto history_path = output_path(a.history, stem + ".history.csv");
  std::ostringstream csv;
  write_history_csv(csv, r);
  write_file(history_path, csv.str());
  std::cout << std::setprecision(10) << "iterations " << r.iterations << (r.converged ? " (converged)" : " (not converged)")
            << "\nlength " << r.lengthHistory.front() << " -> " << r.finalLength << "\nclearance "
            << r.finalClearance << "\nwrote " << config_path.string() << ", " << history_path.string()
            << "\n";
  return exit_code::kOk;
}

struct MorphArgs {
  std::string start;
  std::string target;
  std::string schedule;
  std::optional<std::size_t> frames;
  std::string out;
  std::string endOut;
};

int cmd_morph(const MorphArgs& a) {
  const auto start = load_input(a.start);
  auto schedule = parse_schedule(read_file(a.schedule));
  if (a.frames) schedule.frames = *a.frames;
  const auto result = run_schedule(start, schedule);
  const auto stem = stem_of(a.start) + "_" + (a.target.empty() ? "end" : stem_of(a.target));
  const auto trace_path = output_path(a.out, stem + ".trace.csv");
  std::ostringstream csv;
  write_trace_csv(csv, result.trace);
  write_file(trace_path, csv.str());
  save_config(output_path(a.endOut, stem + ".end.json"), result.end);

  const double baseline = start.total_length();
  std::cout << std::setprecision(10) << "frames " << result.trace.times.size() << ", repaired "
            << result.repairedFrames.size() << "\nmax length " << result.trace.maxLength
            << "\nexcursion " << excursion(result.trace, baseline) << "\nend class "
            << (result.endClass ? result.endClass->str() : "unavailable: " + result.endClassError)
            << "\nwrote " << trace_path.string() << "\n";
  if (!a.target.empty()) {
    const auto target = load_input(a.target);
    const auto target_class =
        dihedral_classify(pi_map(target), blueprint_automorphisms(target.blueprint));
    const bool same = result.endClass && *result.endClass == target_class;
    std::cout << "target class " << target_class.str() << (same ? " (reached)" : " (not reached)")
              << "\n";
    if (!same) return exit_code::kNegativeVerdict;
  }
  return exit_code::kOk;
}

int cmd_export_mesh(const std::string& input, const MeshOptions& opts, const std::string& out) {
  const auto config = load_input(input);
  const auto meshes = tube_meshes(config, opts);
  std::ostringstream obj;
  write_obj(obj, meshes);
  const auto path = output_path(out, stem_of(input) + ".obj");
  write_file(path, obj.str());
  std::size_t vertices = 0, triangles = 0;
  for (const auto& m : meshes) vertices += m.mesh.vertices.size(), triangles += m.mesh.triangles.size();
  std::cout << "wrote " << path.string() << ": " << meshes.size() << " tubes, " << vertices
            << " vertices, " << triangles << " triangles\n";
  return exit_code::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build, measure and certify tight link configurations."};
  app.require_subcommand(1);
  app.footer(std::string("Outputs default to $") + kOutDirEnv +
             " (or the current directory). Builtins: R, W, star, hopf2.");

  int status = exit_code::kOk;

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build an exact tight configuration.");
  build_cmd->add_option("source", build.source, "Builtin name (R, W, star, hopf2) or blueprint file")->required();
  build_cmd->add_option("--theta", build.theta, "Rhombus angle of the central disks, [pi/3, pi/2]");
  build_cmd->add_option("--order", build.order, "Comma-separated ears around the central component");
  build_cmd->add_option("-o,--out", build.out, "Output configuration file");
  build_cmd->callback([&] { status = cmd_build(build); });

  std::string measure_input;
  bool measure_json = false;
  auto* measure_cmd = app.add_subcommand("measure", "Lengths, clearance and linking numbers.");
  measure_cmd->add_option("input", measure_input, "Configuration file or builtin")->required();
  measure_cmd->add_flag("--json", measure_json, "Machine-readable output");
  measure_cmd->callback([&] { status = cmd_measure(measure_input, measure_json); });

  std::string classify_input;
  double planarity = PiMapOptions{}.planarityTol;
  auto* classify_cmd = app.add_subcommand("classify", "Attachment points and their dihedral class.");
  classify_cmd->add_option("input", classify_input, "Configuration file or builtin")->required();
  classify_cmd->add_option("--planarity", planarity, "Allowed non-planarity of ears, relative to size");
  classify_cmd->callback([&] { status = cmd_classify(classify_input, planarity); });

  std::string cert_a, cert_b, cert_out;
  auto* certify_cmd = app.add_subcommand(
      "certify", "Certify tightness of one configuration, or that two form a Gordian pair.");
  certify_cmd->add_option("first", cert_a, "Configuration file or builtin")->required();
  certify_cmd->add_option("second", cert_b, "Second configuration for the pair certificate");
  certify_cmd->add_option("-o,--out", cert_out, "Certificate file");
  certify_cmd->callback([&] { status = cmd_certify(cert_a, cert_b, cert_out); });

  RelaxArgs rel;
  auto* relax_cmd = app.add_subcommand("relax", "Perturb, then shorten under the clearance constraint.");
  relax_cmd->add_option("input", rel.input, "Configuration file or builtin")->required();
  relax_cmd->add_option("--sigma", rel.sigma, "Gaussian vertex noise before relaxing");
  relax_cmd->add_option("--seed", rel.seed, "Noise seed");
  relax_cmd->add_option("--step", rel.params.stepSize, "Gradient step cap");
  relax_cmd->add_option("--iterations", rel.params.maxIterations, "Iteration limit");
  relax_cmd->add_option("--vertices", rel.params.verticesPerComponent, "Vertices per exact component");
  relax_cmd->add_option("--resample-every", rel.params.resampleEvery, "Resampling period");
  relax_cmd->add_option("--tol", rel.params.convergenceTol, "Relative length change for convergence");
  relax_cmd->add_option("--target", rel.params.clearanceTarget, "Clearance to maintain");
  relax_cmd->add_option("-o,--out", rel.out, "Relaxed configuration file");
  relax_cmd->add_option("--history", rel.history, "Length history CSV");
  relax_cmd->callback([&] { status = cmd_relax(rel); });

  MorphArgs mor;
  auto* morph_cmd = app.add_subcommand("morph", "Run a deformation schedule and trace total length.");
  morph_cmd->add_option("start", mor.start, "Start configuration")->required();
  morph_cmd->add_option("target", mor.target, "Configuration whose class the end should reach");
  morph_cmd->add_option("--schedule", mor.schedule, "Schedule file")->required();
  morph_cmd->add_option("--frames", mor.frames, "Override the schedule's frame count");
  morph_cmd->add_option("-o,--out", mor.out, "Trace CSV");
  morph_cmd->add_option("--end-out", mor.endOut, "End configuration file");
  morph_cmd->callback([&] { status = cmd_morph(mor); });

  std::string mesh_input, mesh_out;
  MeshOptions mesh;
  auto* mesh_cmd = app.add_subcommand("export-mesh", "Write tube meshes as OBJ.");
  mesh_cmd->add_option("input", mesh_input, "Configuration file or builtin")->required();
  mesh_cmd->add_option("--radius", mesh.radius, "Tube radius, at most half the clearance");
  mesh_cmd->add_option("--chord", mesh.maxChordError, "Centerline chord error");
  mesh_cmd->add_option("--sides", mesh.sides, "Vertices per ring");
  mesh_cmd->add_option("-o,--out", mesh_out, "OBJ file");
  mesh_cmd->callback([&] { status = cmd_export_mesh(mesh_input, mesh, mesh_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::kDomain;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::kNumerical;
  }
  return status;
}

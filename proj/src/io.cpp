#include "gordian/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gordian/error.hpp"

namespace gordian {

namespace {

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorKind::Parse, (path.empty() ? std::string("document") : path) + ": " + what);
}

const Json& expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  return j;
}

const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  expect_object(obj, path);
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(join_path(path, key), "missing");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<int>();
}

Vec3 vec3(const Json& j, const std::string& path) {
  expect_array(j, path);
  if (j.size() != 3) schema_error(path, "expected 3 coordinates");
  return {number(j[0], index_path(path, 0)), number(j[1], index_path(path, 1)),
          number(j[2], index_path(path, 2))};
}

Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

std::vector<std::string> strings(const Json& j, const std::string& path) {
  expect_array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(text(j[i], index_path(path, i)));
  return out;
}

// Tracks the key/index path while the JSON parser runs so a syntax error can
// name the section it stopped in.
class PathTracker {
 public:
  bool operator()(int, nlohmann::detail::parse_event_t event, Json& parsed) {
    using E = nlohmann::detail::parse_event_t;
    switch (event) {
      case E::object_start: stack_.push_back({false, {}, 0}); break;
      case E::array_start: stack_.push_back({true, {}, 0}); break;
      case E::key:
        if (!stack_.empty()) stack_.back().key = parsed.get<std::string>();
        break;
      case E::object_end:
      case E::array_end:
        if (!stack_.empty()) stack_.pop_back();
        advance();
        break;
      case E::value: advance(); break;
    }
    return true;
  }

  std::string path() const {
    std::string out;
    for (const auto& level : stack_) {
      if (level.array)
        out += "[" + std::to_string(level.index) + "]";
      else if (!level.key.empty())
        out += (out.empty() ? "" : ".") + level.key;
    }
    return out;
  }

 private:
  struct Level {
    bool array;
    std::string key;
    std::size_t index;
  };

  void advance() {
    if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
  }

  std::vector<Level> stack_;
};

Json parse_json(std::string_view input) {
  auto tracker = std::make_shared<PathTracker>();
  try {
    return Json::parse(input.begin(), input.end(),
                       [tracker](int depth, nlohmann::detail::parse_event_t event, Json& parsed) {
                         return (*tracker)(depth, event, parsed);
                       });
  } catch (const nlohmann::json::parse_error& e) {
    std::ostringstream msg;
    msg << "syntax error in " << (tracker->path().empty() ? "document" : tracker->path())
        << " at byte " << e.byte;
    fail(ErrorKind::Parse, msg.str());
  }
}

void check_header(const Json& doc, std::string_view format) {
  expect_object(doc, "");
  if (text(field(doc, "", "format"), "format") != format)
    schema_error("format", "expected \"" + std::string(format) + "\"");
  if (integer(field(doc, "", "version"), "version") != kFormatVersion)
    schema_error("version", "unsupported version");
}

// --- geometry ---------------------------------------------------------------

Json piece_to_json(const CurvePiece& piece) {
  if (const auto* s = std::get_if<Segment>(&piece))
    return {{"type", "segment"}, {"start", vec3_json(s->start)}, {"end", vec3_json(s->end)}};
  const auto& a = std::get<Arc>(piece);
  return {{"type", "arc"},
          {"center", vec3_json(a.frame.origin)},
          {"u", vec3_json(a.frame.u)},
          {"v", vec3_json(a.frame.v)},
          {"n", vec3_json(a.frame.n)},
          {"radius", a.radius},
          {"startAngle", a.startAngle},
          {"sweep", a.sweep}};
}

CurvePiece piece_from_json(const Json& j, const std::string& path) {
  const auto type = text(field(j, path, "type"), join_path(path, "type"));
  auto vec = [&](const char* key) { return vec3(field(j, path, key), join_path(path, key)); };
  auto num = [&](const char* key) { return number(field(j, path, key), join_path(path, key)); };
  if (type == "segment") return Segment{vec("start"), vec("end")};
  if (type == "arc") {
    PlanarFrame frame{vec("center"), vec("u"), vec("v"), vec("n")};
    return Arc{frame, num("radius"), num("startAngle"), num("sweep")};
  }
  schema_error(join_path(path, "type"), "unknown piece type '" + type + "'");
}

Json geometry_to_json(const ComponentGeometry& g) {
  if (const auto* c = std::get_if<ArcSegCurve>(&g)) {
    Json pieces = Json::array();
    for (const auto& p : c->pieces()) pieces.push_back(piece_to_json(p));
    return {{"kind", "arcseg"}, {"closed", c->closed()}, {"pieces", std::move(pieces)}};
  }
  const auto& p = std::get<Polyline>(g);
  Json vertices = Json::array();
  for (const auto& v : p.vertices) vertices.push_back(vec3_json(v));
  return {{"kind", "polyline"}, {"closed", p.closed}, {"vertices", std::move(vertices)}};
}

ComponentGeometry geometry_from_json(const Json& j, const std::string& path) {
  const auto kind = text(field(j, path, "kind"), join_path(path, "kind"));
  bool closed = true;
  if (const auto* c = optional_field(j, "closed")) {
    if (!c->is_boolean()) schema_error(join_path(path, "closed"), "expected true or false");
    closed = c->get<bool>();
  }
  if (kind == "arcseg") {
    const auto pieces_path = join_path(path, "pieces");
    const auto& arr = expect_array(field(j, path, "pieces"), pieces_path);
    std::vector<CurvePiece> pieces;
    for (std::size_t i = 0; i < arr.size(); ++i)
      pieces.push_back(piece_from_json(arr[i], index_path(pieces_path, i)));
    return ArcSegCurve(std::move(pieces), closed);
  }
  if (kind == "polyline") {
    const auto vpath = join_path(path, "vertices");
    const auto& arr = expect_array(field(j, path, "vertices"), vpath);
    Polyline p;
    p.closed = closed;
    for (std::size_t i = 0; i < arr.size(); ++i) p.vertices.push_back(vec3(arr[i], index_path(vpath, i)));
    return p;
  }
  schema_error(join_path(path, "kind"), "unknown geometry kind '" + kind + "'");
}

LinkBlueprint blueprint_from_json(const Json& j, const std::string& path) {
  const auto cpath = join_path(path, "components");
  const auto& comps = expect_array(field(j, path, "components"), cpath);
  std::vector<ComponentSpec> specs;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto p = index_path(cpath, i);
    const auto type_text = text(field(comps[i], p, "type"), join_path(p, "type"));
    const auto type = component_type_from_string(type_text);
    if (!type) schema_error(join_path(p, "type"), "unknown component type '" + type_text + "'");
    specs.push_back({text(field(comps[i], p, "label"), join_path(p, "label")), *type});
  }
  const auto epath = join_path(path, "edges");
  const auto& edges = expect_array(field(j, path, "edges"), epath);
  std::vector<LinkEdge> links;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto p = index_path(epath, i);
    LinkEdge e{text(field(edges[i], p, "a"), join_path(p, "a")),
               text(field(edges[i], p, "b"), join_path(p, "b")), 1};
    if (const auto* m = optional_field(edges[i], "multiplicity"))
      e.multiplicity = integer(*m, join_path(p, "multiplicity"));
    links.push_back(std::move(e));
  }
  try {
    return LinkBlueprint(std::move(specs), std::move(links));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

std::string pi_term(double b) {
  const long twice = std::lround(2 * b);
  if (twice % 2 == 0) {
    const long k = twice / 2;
    return k == 1 ? "pi" : std::to_string(k) + "*pi";
  }
  return std::to_string(twice) + "/2*pi";
}

bool near_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

std::optional<std::pair<double, double>> exact_parts(const ComponentGeometry& g) {
  const auto* c = std::get_if<ArcSegCurve>(&g);
  if (!c) return std::nullopt;
  double a = 0.0, b = 0.0;
  for (const auto& p : c->pieces()) {
    if (const auto* arc = std::get_if<Arc>(&p))
      b += arc->radius * arc->sweep / kPi;
    else
      a += piece_length(p);
  }
  if (!near_integer(a) || !near_integer(2 * b)) return std::nullopt;
  return std::pair{std::round(a), std::round(2 * b) / 2};
}

std::string format_exact(double a, double b) {
  if (b == 0) return std::to_string(std::lround(a));
  if (a == 0) return pi_term(b);
  return std::to_string(std::lround(a)) + "+" + pi_term(b);
}

}  // namespace

std::optional<std::string> exact_length_tag(const ComponentGeometry& g) {
  const auto parts = exact_parts(g);
  if (!parts) return std::nullopt;
  return format_exact(parts->first, parts->second);
}

Json blueprint_to_json(const LinkBlueprint& bp) {
  Json comps = Json::array();
  for (const auto& c : bp.components()) comps.push_back({{"label", c.label}, {"type", to_string(c.type)}});
  Json edges = Json::array();
  for (const auto& e : bp.edges()) edges.push_back({{"a", e.a}, {"b", e.b}, {"multiplicity", e.multiplicity}});
  return {{"components", std::move(comps)}, {"edges", std::move(edges)}};
}

Json config_to_json(const LinkConfiguration& config) {
  Json meta = Json::object();
  meta["name"] = config.metadata.name;
  meta["theta"] = config.metadata.theta ? Json(*config.metadata.theta) : Json(nullptr);
  meta["earOrder"] = config.metadata.earOrder;
  meta["provenance"] = config.metadata.provenance;
  Json lengths = Json::object();
  double sum_a = 0.0, sum_b = 0.0;
  bool all_exact = true;
  for (const auto& c : config.blueprint.components()) {
    auto it = config.geometry.find(c.label);
    if (it == config.geometry.end()) continue;
    Json entry = {{"value", geometry_length(it->second)}};
    if (const auto parts = exact_parts(it->second)) {
      entry["exact"] = format_exact(parts->first, parts->second);
      sum_a += parts->first;
      sum_b += parts->second;
    } else {
      all_exact = false;
    }
    lengths[c.label] = std::move(entry);
  }
  double total = 0.0;
  for (const auto& [label, g] : config.geometry) total += geometry_length(g);
  Json total_entry = {{"value", total}};
  if (all_exact && !config.geometry.empty()) total_entry["exact"] = format_exact(sum_a, sum_b);
  lengths["total"] = std::move(total_entry);
  meta["lengths"] = std::move(lengths);

  Json geometry = Json::object();
  for (const auto& c : config.blueprint.components()) {
    auto it = config.geometry.find(c.label);
    if (it != config.geometry.end()) geometry[c.label] = geometry_to_json(it->second);
  }
  for (const auto& [label, g] : config.geometry)
    if (!config.blueprint.contains(label)) geometry[label] = geometry_to_json(g);

  return {{"format", kConfigFormat},
          {"version", kFormatVersion},
          {"metadata", std::move(meta)},
          {"tight", config.tight},
          {"blueprint", blueprint_to_json(config.blueprint)},
          {"geometry", std::move(geometry)}};
}

std::string serialize_config(const LinkConfiguration& config) {
  return config_to_json(config).dump(2) + "\n";
}

LinkConfiguration parse_config(std::string_view input) {
  const Json doc = parse_json(input);
  check_header(doc, kConfigFormat);
  LinkConfiguration config;

  const auto& meta = field(doc, "", "metadata");
  expect_object(meta, "metadata");
  if (const auto* n = optional_field(meta, "name")) config.metadata.name = text(*n, "metadata.name");
  if (const auto* t = optional_field(meta, "theta")) config.metadata.theta = number(*t, "metadata.theta");
  if (const auto* o = optional_field(meta, "earOrder"))
    config.metadata.earOrder = strings(*o, "metadata.earOrder");
  if (const auto* p = optional_field(meta, "provenance"))
    config.metadata.provenance = text(*p, "metadata.provenance");

  const auto& tight = field(doc, "", "tight");
  if (!tight.is_boolean()) schema_error("tight", "expected true or false");
  config.tight = tight.get<bool>();

  config.blueprint = blueprint_from_json(field(doc, "", "blueprint"), "blueprint");

  const auto& geometry = expect_object(field(doc, "", "geometry"), "geometry");
  for (const auto& [label, g] : geometry.items())
    config.geometry.emplace(label, geometry_from_json(g, join_path("geometry", label)));
  return config;
}

LinkBlueprint parse_blueprint(std::string_view input) {
  const Json doc = parse_json(input);
  return blueprint_from_json(field(doc, "", "blueprint"), "blueprint");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Domain, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(ErrorKind::Domain, "failed writing '" + path.string() + "'");
}

LinkConfiguration load_config(const std::filesystem::path& path) {
  LinkConfiguration config;
  try {
    config = parse_config(read_file(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  for (const auto& [label, g] : config.geometry)
    if (const auto problems = geometry_problems(g); !problems.empty())
      fail(ErrorKind::Validation, path.string() + ": geometry." + label + ": " + problems.front());
  return config;
}

void save_config(const std::filesystem::path& path, const LinkConfiguration& config) {
  write_file(path, serialize_config(config));
}

// --- schedules --------------------------------------------------------------

Json schedule_to_json(const MorphSchedule& schedule) {
  Json moves = Json::array();
  for (const auto& m : schedule.moves) {
    Json j = std::visit(
        [](const auto& move) -> Json {
          using T = std::decay_t<decltype(move)>;
          if constexpr (std::is_same_v<T, HoldMove>) {
            return {{"type", "hold"}};
          } else if constexpr (std::is_same_v<T, SlideMove>) {
            return {{"type", "slide"}, {"label", move.label}, {"by", move.by}};
          } else if constexpr (std::is_same_v<T, InflateMove>) {
            return {{"type", "inflate"}, {"label", move.label}, {"by", move.by}};
          } else {
            return {{"type", "rigid"},          {"labels", move.labels},
                    {"axis", vec3_json(move.axis)}, {"angle", move.angle},
                    {"about", vec3_json(move.about)}, {"translate", vec3_json(move.translate)}};
          }
        },
        m.move);
    j["start"] = m.start;
    j["end"] = m.end;
    moves.push_back(std::move(j));
  }
  return {{"format", kScheduleFormat},
          {"version", kFormatVersion},
          {"frames", schedule.frames},
          {"moves", std::move(moves)}};
}

MorphSchedule parse_schedule(std::string_view input) {
  const Json doc = parse_json(input);
  check_header(doc, kScheduleFormat);
  MorphSchedule s;
  if (const auto* f = optional_field(doc, "frames")) {
    const int frames = integer(*f, "frames");
    if (frames < 0) schema_error("frames", "must be non-negative");
    s.frames = static_cast<std::size_t>(frames);
  }
  const auto& moves = expect_array(field(doc, "", "moves"), "moves");
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const auto p = index_path("moves", i);
    const auto& j = moves[i];
    const auto type = text(field(j, p, "type"), join_path(p, "type"));
    auto num = [&](const char* key) { return number(field(j, p, key), join_path(p, key)); };
    auto label = [&] { return text(field(j, p, "label"), join_path(p, "label")); };
    ScheduledMove m;
    if (type == "hold") {
      m.move = HoldMove{};
    } else if (type == "slide") {
      m.move = SlideMove{label(), num("by")};
    } else if (type == "inflate") {
      m.move = InflateMove{label(), num("by")};
    } else if (type == "rigid") {
      RigidMove r;
      if (const auto* l = optional_field(j, "labels")) r.labels = strings(*l, join_path(p, "labels"));
      if (const auto* a = optional_field(j, "axis")) r.axis = vec3(*a, join_path(p, "axis"));
      if (const auto* a = optional_field(j, "angle")) r.angle = number(*a, join_path(p, "angle"));
      if (const auto* a = optional_field(j, "about")) r.about = vec3(*a, join_path(p, "about"));
      if (const auto* a = optional_field(j, "translate"))
        r.translate = vec3(*a, join_path(p, "translate"));
      m.move = std::move(r);
    } else {
      schema_error(join_path(p, "type"), "unknown move type '" + type + "'");
    }
    m.start = num("start");
    m.end = num("end");
    s.moves.push_back(std::move(m));
  }
  return s;
}

// --- certificates -----------------------------------------------------------

Json tightness_to_json(const TightnessCertificate& cert) {
  Json per = Json::object();
  for (const auto& [label, b] : cert.perComponent)
    per[label] = {{"lowerBound", b.lowerBound}, {"achieved", b.achieved}};
  return {{"verdict", to_string(cert.verdict)},
          {"perComponent", std::move(per)},
          {"totalLowerBound", cert.totalLowerBound},
          {"totalAchieved", cert.totalAchieved},
          {"clearance", cert.clearance},
          {"clearanceErrorBound", cert.clearanceErrorBound},
          {"linkingOk", cert.linkingOk},
          {"notes", cert.notes}};
}

namespace {

Json side_to_json(const GordianSide& side) {
  Json j = {{"tightness", tightness_to_json(side.tightness)}};
  if (side.points) {
    Json pts = Json::array();
    for (const auto& p : side.points->entries()) pts.push_back({{"label", p.label}, {"s", p.s}});
    j["piMap"] = std::move(pts);
  } else {
    j["piMap"] = nullptr;
  }
  if (side.onArc) {
    Json placements = Json::array();
    for (const auto& p : side.onArc->placements)
      placements.push_back(
          {{"label", p.label}, {"s", p.s}, {"piece", p.pieceIndex}, {"onArc", p.onArc}});
    j["onArc"] = {{"ok", side.onArc->ok}, {"placements", std::move(placements)}, {"note", side.onArc->note}};
  } else {
    j["onArc"] = nullptr;
  }
  if (side.dihedral)
    j["dihedralClass"] = {{"canonicalWord", side.dihedral->canonicalWord},
                          {"typeWord", side.dihedral->typeWord}};
  else
    j["dihedralClass"] = nullptr;
  if (!side.piMapError.empty()) j["piMapError"] = side.piMapError;
  return j;
}

}  // namespace

Json certificate_to_json(const GordianCertificate& cert) {
  const auto& t = cert.tolerances;
  return {{"verdict", to_string(cert.verdict)},
          {"reasons", cert.reasons},
          {"blueprintsMatch", cert.blueprintsMatch},
          {"symmetryOrder", cert.symmetryOrder},
          {"tolerances",
           {{"maxChordError", t.maxChordError},
            {"clearanceTol", t.clearanceTol},
            {"lengthRelTol", t.lengthRelTol},
            {"linkingVertices", t.linkingVertices}}},
          {"premises", cert.premises},
          {"a", side_to_json(cert.a)},
          {"b", side_to_json(cert.b)}};
}

// --- measurement ------------------------------------------------------------

MeasureReport measure(const LinkConfiguration& config, double max_chord_error,
                      std::size_t linking_vertices) {
  MeasureReport r;
  for (const auto& c : config.blueprint.components()) {
    r.labels.push_back(c.label);
    r.lengths.push_back(geometry_length(config.at(c.label)));
    r.totalLength += r.lengths.back();
  }
  if (config.blueprint.size() >= 2) {
    r.clearance = gehring_thickness(config, max_chord_error);
    if (r.clearance->globalMin > 0) r.gehringRopelength = r.totalLength / r.clearance->globalMin;
    try {
      r.linking = linking_matrix(config, linking_vertices);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IllConditioned) throw;
    }
  }
  return r;
}

Json measure_to_json(const MeasureReport& r) {
  Json lengths = Json::object();
  for (std::size_t i = 0; i < r.labels.size(); ++i) lengths[r.labels[i]] = r.lengths[i];
  Json j = {{"labels", r.labels}, {"lengths", std::move(lengths)}, {"totalLength", r.totalLength}};
  if (r.clearance) {
    const auto& c = *r.clearance;
    j["clearance"] = {{"value", c.globalMin},
                      {"errorBound", c.errorBound},
                      {"between", {c.argmin.labelA, c.argmin.labelB}},
                      {"pointA", vec3_json(c.argmin.pointA)},
                      {"pointB", vec3_json(c.argmin.pointB)}};
  } else {
    j["clearance"] = nullptr;
  }
  j["gehringRopelength"] = r.gehringRopelength ? Json(*r.gehringRopelength) : Json(nullptr);
  if (r.linking) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < r.linking->values.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < r.linking->values.cols(); ++k) row.push_back(r.linking->values(i, k));
      rows.push_back(std::move(row));
    }
    j["linkingMatrix"] = std::move(rows);
    j["linkingMaxResidual"] = r.linking->maxResidual;
  } else {
    j["linkingMatrix"] = nullptr;
  }
  return j;
}

void write_history_csv(std::ostream& out, const RelaxReport& report) {
  out << "iteration,totalLength\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.lengthHistory.size(); ++i)
    out << i << "," << report.lengthHistory[i] << "\n";
}

void write_trace_csv(std::ostream& out, const MorphTrace& trace) {
  out << "time,totalLength,clearance,linkingOk\n";
  out.precision(17);
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    out << trace.times[i] << "," << trace.totalLength[i] << "," << trace.clearance[i] << ","
        << (trace.linkingOk[i] ? "true" : "false") << "\n";
}

}  // namespace gordian

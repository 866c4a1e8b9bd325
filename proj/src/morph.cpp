#include "gordian/morph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gordian/clearance.hpp"
#include "gordian/error.hpp"
#include "gordian/linkmodel.hpp"

namespace gordian {

namespace {

constexpr double kTraceClearanceTol = 1e-3;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const std::string* moved_label(const Move& m) {
  if (const auto* s = std::get_if<SlideMove>(&m)) return &s->label;
  if (const auto* s = std::get_if<InflateMove>(&m)) return &s->label;
  return nullptr;
}

double progress(const ScheduledMove& m, double t) {
  if (t <= m.start) return 0.0;
  if (t >= m.end) return 1.0;
  return (t - m.start) / (m.end - m.start);
}

}  // namespace

void MorphSchedule::validate() const {
  if (frames < 2) fail(ErrorKind::Validation, "a schedule needs at least 2 frames");
  if (moves.empty()) fail(ErrorKind::Validation, "a schedule needs at least one move");
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const auto& m = moves[i];
    if (!(m.start >= 0.0 && m.end <= 1.0 && m.start < m.end))
      fail(ErrorKind::Validation,
           "move " + std::to_string(i) + " needs 0 <= start < end <= 1");
    if (const auto* r = std::get_if<RigidMove>(&m.move); r && !(r->axis.norm() > 0))
      fail(ErrorKind::Validation, "move " + std::to_string(i) + " has a zero rotation axis");
    spans.emplace_back(m.start, m.end);
  }
  std::sort(spans.begin(), spans.end());
  double covered = 0.0;
  for (const auto& [a, b] : spans) {
    if (a > covered + 1e-12) break;
    covered = std::max(covered, b);
  }
  if (covered < 1.0 - 1e-12) {
    std::ostringstream msg;
    msg << "move intervals leave time " << covered << " uncovered";
    fail(ErrorKind::Validation, msg.str());
  }
}

bool MorphTrace::valid() const {
  if (times.empty()) return false;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!(clearance[i] >= 1.0 - kTraceClearanceTol) || !linkingOk[i]) return false;
  return true;
}

double excursion(const MorphTrace& trace, double baseline) {
  if (!trace.valid())
    fail(ErrorKind::Domain, "excursion of an invalid trace (clearance or linking violated)");
  return trace.maxLength - baseline;
}

TightLayout recover_layout(const LinkConfiguration& config) {
  if (!config.metadata.theta || config.metadata.earOrder.empty())
    fail(ErrorKind::Domain, "configuration metadata lacks theta or ear order");
  const auto layout =
      canonical_layout(config.blueprint, config.metadata.earOrder, ModuliPoint(*config.metadata.theta));
  const auto rebuilt = realize(layout);
  for (const auto& c : config.blueprint.components()) {
    const auto& g = config.at(c.label);
    if (!is_exact(g))
      fail(ErrorKind::Domain, "component '" + c.label + "' is not exact geometry");
    const auto a = to_polyline_sampled(g, 64);
    const auto b = to_polyline_sampled(rebuilt.at(c.label), 64);
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
      if ((a.vertices[i] - b.vertices[i]).norm() > 1e-9)
        fail(ErrorKind::Domain, "component '" + c.label + "' does not match its recorded layout");
  }
  return layout;
}

namespace {

void check_moves(const MorphSchedule& schedule, const TightLayout& layout) {
  for (const auto& m : schedule.moves) {
    if (const auto* label = moved_label(m.move)) {
      const bool is_ear = std::any_of(layout.ears.begin(), layout.ears.end(),
                                      [&](const EarPlacement& e) { return e.label == *label; });
      if (!is_ear) fail(ErrorKind::Validation, "'" + *label + "' is not an ear of the start");
    }
    if (const auto* r = std::get_if<RigidMove>(&m.move))
      for (const auto& label : r->labels)
        if (!layout.blueprint.contains(label))
          fail(ErrorKind::Validation, "rigid move names unknown component '" + label + "'");
  }
}

LinkConfiguration frame_geometry(const TightLayout& base, const MorphSchedule& schedule, double t) {
  TightLayout layout = base;
  auto ear = [&](const std::string& label) -> EarPlacement& {
    return *std::find_if(layout.ears.begin(), layout.ears.end(),
                         [&](const EarPlacement& e) { return e.label == label; });
  };
  for (const auto& m : schedule.moves) {
    const double f = progress(m, t);
    std::visit(overloaded{
                   [](const HoldMove&) {},
                   [&](const SlideMove& s) { ear(s.label).arclength += f * s.by; },
                   [&](const InflateMove& s) { ear(s.label).inflation += f * s.by; },
                   [](const RigidMove&) {},
               },
               m.move);
  }
  LinkConfiguration config = realize(layout);
  for (const auto& m : schedule.moves) {
    const auto* r = std::get_if<RigidMove>(&m.move);
    const double f = progress(m, t);
    if (!r || f == 0.0) continue;
    const auto motion = Similarity::translation_by(f * r->translate)
                            .compose(Similarity::rotation_about(r->axis.normalized(), f * r->angle,
                                                                r->about));
    for (auto& [label, g] : config.geometry)
      if (r->labels.empty() || std::find(r->labels.begin(), r->labels.end(), label) != r->labels.end())
        g = transform_geometry(g, motion);
  }
  return config;
}

bool linking_ok(const LinkConfiguration& config, std::size_t vertices) {
  try {
    return linking_matrix(config, vertices).values == config.blueprint.linking_matrix();
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

MorphResult run_schedule(const LinkConfiguration& start, const MorphSchedule& schedule,
                         const MorphOptions& options) {
  schedule.validate();
  options.repair.validate();
  const auto base = recover_layout(start);
  check_moves(schedule, base);

  MorphResult result;
  auto& trace = result.trace;
  const double target = options.repair.clearanceTarget;
  for (std::size_t k = 0; k < schedule.frames; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(schedule.frames - 1);
    LinkConfiguration frame = frame_geometry(base, schedule, t);
    double length = frame.total_length();
    const auto report = gehring_thickness(frame, options.clearanceChordError);
    double clearance = report.globalMin;
    bool linked = linking_ok(frame, options.linkingVertices);

    if (clearance < target - report.errorBound - 1e-9) {
      // Repair on polylines; lengths move by the polyline change.
      LinkConfiguration poly = as_polylines(frame, options.repair.verticesPerComponent);
      std::vector<Polyline> polys;
      for (const auto& c : poly.blueprint.components())
        polys.push_back(std::get<Polyline>(poly.at(c.label)));
      double before = 0.0;
      for (const auto& p : polys) before += p.length();
      push_apart(polys, target, options.repair.penaltyWeight, options.repair.maxIterations);
      double after = 0.0;
      for (const auto& p : polys) after += p.length();
      clearance = polyline_clearance(polys);
      if (clearance < target - kTraceClearanceTol) {
        std::ostringstream msg;
        msg << "frame " << k << " (t = " << t << "): clearance " << clearance
            << " cannot be repaired";
        fail(ErrorKind::ScheduleInfeasible, msg.str());
      }
      length += std::max(0.0, after - before);
      for (std::size_t c = 0; c < polys.size(); ++c)
        poly.geometry.at(poly.blueprint.components()[c].label) = std::move(polys[c]);
      frame = std::move(poly);
      linked = linking_ok(frame, options.linkingVertices);
      result.repairedFrames.push_back(k);
    }

    trace.times.push_back(t);
    trace.totalLength.push_back(length);
    trace.clearance.push_back(clearance);
    trace.linkingOk.push_back(linked);
    trace.maxLength = std::max(trace.maxLength, length);
    if (k + 1 == schedule.frames) result.end = std::move(frame);
  }

  result.end.tight = false;
  result.end.metadata.provenance = "morph";
  try {
    const auto sym = blueprint_automorphisms(result.end.blueprint);
    result.endClass = dihedral_classify(pi_map(result.end), sym, &result.end.blueprint);
  } catch (const Error& e) {
    result.endClassError = e.what();
  }
  return result;
}

MorphSchedule ear_exchange_schedule(std::size_t frames) {
  // On the square, an arc midpoint sits pi/4 + 1 before and after the
  // midpoints of the neighbouring sides. The two ears meet 1/2 either side
  // of the side's midpoint.
  const double approach = kPi / 4 + 0.5;
  MorphSchedule s;
  s.frames = frames;
  s.moves = {
      {SlideMove{"P1", approach}, 0.0, 0.2},
      {SlideMove{"D2", -approach}, 0.0, 0.2},
      {InflateMove{"D2", 1.0}, 0.2, 0.4},
      {SlideMove{"D2", -1.0}, 0.4, 0.6},
      {SlideMove{"P1", 1.0}, 0.4, 0.6},
      {InflateMove{"D2", -1.0}, 0.6, 0.8},
      {SlideMove{"D2", -approach}, 0.8, 1.0},
      {SlideMove{"P1", approach}, 0.8, 1.0},
  };
  return s;
}

}  // namespace gordian

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "gordian/error.hpp"
#include "gordian/io.hpp"

using namespace gordian;

namespace {

void expect_parse_error(std::string_view text, const std::string& where) {
  try {
    parse_config(text);
    ADD_FAILURE() << "no error for " << where;
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
  }
}

void expect_same_geometry(const LinkConfiguration& a, const LinkConfiguration& b) {
  ASSERT_EQ(a.geometry.size(), b.geometry.size());
  for (const auto& [label, g] : a.geometry) {
    const auto& h = b.at(label);
    ASSERT_EQ(g.index(), h.index()) << label;
    if (const auto* p = std::get_if<Polyline>(&g)) {
      EXPECT_EQ(p->vertices, std::get<Polyline>(h).vertices) << label;
    } else {
      const auto& x = std::get<ArcSegCurve>(g).pieces();
      const auto& y = std::get<ArcSegCurve>(h).pieces();
      ASSERT_EQ(x.size(), y.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (const auto* s = std::get_if<Segment>(&x[k])) {
          EXPECT_EQ(s->start, std::get<Segment>(y[k]).start);
          EXPECT_EQ(s->end, std::get<Segment>(y[k]).end);
        } else {
          const auto& u = std::get<Arc>(x[k]);
          const auto& v = std::get<Arc>(y[k]);
          EXPECT_EQ(u.frame.origin, v.frame.origin);
          EXPECT_EQ(u.frame.u, v.frame.u);
          EXPECT_EQ(u.frame.v, v.frame.v);
          EXPECT_EQ(u.frame.n, v.frame.n);
          EXPECT_EQ(u.radius, v.radius);
          EXPECT_EQ(u.startAngle, v.startAngle);
          EXPECT_EQ(u.sweep, v.sweep);
        }
      }
    }
  }
}

}  // namespace

TEST(IoProperty, RoundTripBitExact) {
  std::vector<LinkConfiguration> samples{fixture::R(), fixture::W(), build_hopf_pair()};
  for (double theta : {1.0471975511965976, 1.2345678901234567, 1.5})
    samples.push_back(build_tight(default_blueprint(), wing_order(), ModuliPoint(theta)));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> sigma(1e-6, 0.3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) samples.push_back(perturb(fixture::R(), sigma(rng), seed));
  samples.push_back(fixture::R().transformed(
      Similarity::rotation_about(Vec3(1, 2, 3).normalized(), 0.123456789, Vec3(0.1, 0.2, 0.3))));
  for (const auto& cfg : samples) {
    const std::string text = serialize_config(cfg);
    const auto back = parse_config(text);
    EXPECT_EQ(serialize_config(back), text);
    EXPECT_EQ(back.blueprint, cfg.blueprint);
    EXPECT_EQ(back.tight, cfg.tight);
    EXPECT_EQ(back.metadata.theta, cfg.metadata.theta);
    EXPECT_EQ(back.metadata.earOrder, cfg.metadata.earOrder);
    expect_same_geometry(cfg, back);
  }
}

TEST(Io, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "gordian_io_test";
  const auto path = dir / "nested" / "R.json";
  save_config(path, fixture::R());
  const auto back = load_config(path);
  expect_same_geometry(fixture::R(), back);
  std::filesystem::remove_all(dir);
}

TEST(Io, TruncatedEdgesNameTheSection) {
  const std::string text = serialize_config(fixture::R());
  const auto cut = text.find("\"multiplicity\"", text.find("\"edges\""));
  ASSERT_NE(cut, std::string::npos);
  expect_parse_error(std::string_view(text).substr(0, cut + 5), "blueprint.edges");
}

TEST(Io, SchemaErrorsNameTheSection) {
  auto j = config_to_json(fixture::R());
  j["geometry"]["C"]["pieces"][0]["radius"] = "one";
  expect_parse_error(j.dump(), "geometry.C.pieces[0].radius");

  j = config_to_json(fixture::R());
  j["blueprint"]["components"][2]["type"] = "handle";
  expect_parse_error(j.dump(), "blueprint.components[2]");

  j = config_to_json(fixture::R());
  j["format"] = "something-else";
  expect_parse_error(j.dump(), "format");

  expect_parse_error("", "byte");
}

TEST(Io, LoadErrors) {
  try {
    load_config("/nonexistent/path.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
  auto j = config_to_json(fixture::R());
  j["geometry"]["P1"]["pieces"][0]["sweep"] = 0.0;
  const auto path = std::filesystem::temp_directory_path() / "gordian_bad_geometry.json";
  write_file(path, j.dump());
  try {
    load_config(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(std::string(e.what()).find("P1"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}

TEST(Io, ParseBlueprint) {
  EXPECT_EQ(parse_blueprint(serialize_config(fixture::W())), default_blueprint());
  const Json only{{"blueprint", blueprint_to_json(star_blueprint())}};
  EXPECT_EQ(parse_blueprint(only.dump()), star_blueprint());
}

TEST(Io, ExactLengthTags) {
  const auto& R = fixture::R();
  EXPECT_EQ(exact_length_tag(R.at("C")), "8+2*pi");
  EXPECT_EQ(exact_length_tag(R.at("D1")), "4+2*pi");
  EXPECT_EQ(exact_length_tag(R.at("P1")), "2*pi");
  EXPECT_EQ(exact_length_tag(to_polyline_sampled(R.at("P1"), 16)), std::nullopt);
  const auto meta = config_to_json(R)["metadata"]["lengths"]["total"];
  EXPECT_EQ(meta["exact"], "16+14*pi");
}

TEST(Io, ScheduleRoundTrip) {
  auto s = ear_exchange_schedule(37);
  RigidMove spin;
  spin.labels = {"P1", "d2"};
  spin.axis = Vec3(0.1, 0.2, 0.97);
  spin.angle = 0.3;
  spin.translate = Vec3(1, -2, 0.5);
  s.moves.push_back({spin, 0.25, 0.75});
  const auto text = schedule_to_json(s).dump();
  const auto back = parse_schedule(text);
  EXPECT_EQ(schedule_to_json(back).dump(), text);
  EXPECT_EQ(back.frames, 37u);
  EXPECT_THROW(parse_schedule(R"({"format":"gordian-schedule","version":1,"frames":3,"moves":[{"kind":"teleport"}]})"),
               Error);
}

TEST(Io, CertificateDocument) {
  const auto cert = gordian_certify(fixture::R(), fixture::W());
  const auto j = certificate_to_json(cert);
  EXPECT_EQ(j["verdict"], "GORDIAN");
  for (const char* key : {"blueprintsMatch", "symmetryOrder", "premises", "tolerances", "a", "b"})
    EXPECT_TRUE(j.contains(key)) << key;
  for (const char* side : {"a", "b"})
    for (const char* key : {"tightness", "piMap", "onArc", "dihedralClass"})
      EXPECT_FALSE(j[side][key].is_null()) << side << "." << key;
}

TEST(Io, MeasureReport) {
  const auto r = measure(fixture::W());
  EXPECT_NEAR(r.totalLength, 16 + 14 * kPi, 1e-12);
  ASSERT_TRUE(r.clearance.has_value());
  EXPECT_NEAR(r.clearance->globalMin, 1.0, 1e-6);
  ASSERT_TRUE(r.linking.has_value());
  EXPECT_EQ(r.linking->values, default_blueprint().linking_matrix());
  const auto j = measure_to_json(r);
  EXPECT_EQ(j["totalLength"], r.totalLength);
}

TEST(Io, CsvHeaders) {
  RelaxReport rep;
  rep.lengthHistory = {3.0, 2.5};
  std::ostringstream a;
  write_history_csv(a, rep);
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "iteration,totalLength");
  MorphTrace t;
  t.times = {0.0};
  t.totalLength = {1.0};
  t.clearance = {1.0};
  t.linkingOk = {true};
  std::ostringstream b;
  write_trace_csv(b, t);
  EXPECT_EQ(b.str().substr(0, b.str().find('\n')), "time,totalLength,clearance,linkingOk");
}

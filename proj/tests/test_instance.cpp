#include <gtest/gtest.h>

#include "psdp/instance.hpp"
#include "psdp/json_io.hpp"

namespace psdp {
namespace {

using io::Json;

Json general_doc(const Json& a0, const Json& b) {
  return Json{{"format", "psdp-instance/v1"}, {"kind", "general"}, {"n", 2},  {"m", 1},
              {"C", Json::parse("[[1,0],[0,1]]")}, {"A", Json::array({a0})}, {"b", b},
              {"metadata", {{"name", "t"}}}};
}

std::string error_of(const Json& doc, ErrorKind* kind = nullptr) {
  try {
    io::instance_from_json(doc);
  } catch (const Error& e) {
    if (kind) *kind = e.kind();
    return e.what();
  }
  return "";
}

TEST(ReadInstance, IdentityGeneral) {
  const auto inst = io::instance_from_json(general_doc(Json::parse("[[1,0],[0,1]]"), Json::array({1.0})));
  ASSERT_TRUE(std::holds_alternative<PositiveSdpInstance>(inst));
  const auto& g = std::get<PositiveSdpInstance>(inst);
  EXPECT_EQ(g.n(), 2);
  EXPECT_EQ(g.m(), 1);
}

TEST(ReadInstance, NegativeRhs) {
  ErrorKind kind{};
  const auto msg = error_of(general_doc(Json::parse("[[1,0],[0,1]]"), Json::array({-1.0})), &kind);
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_NE(msg.find("b[0] negative"), std::string::npos) << msg;
}

TEST(ReadInstance, NonPsdMatrix) {
  ErrorKind kind{};
  const auto msg = error_of(general_doc(Json::parse("[[0,1],[1,0]]"), Json::array({1.0})), &kind);
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_NE(msg.find("A[0] not PSD"), std::string::npos) << msg;
}

TEST(ReadInstance, MalformedEntryNamesField) {
  ErrorKind kind{};
  const auto msg = error_of(general_doc(Json::parse("[[1,\"x\"],[0,1]]"), Json::array({1.0})), &kind);
  EXPECT_EQ(kind, ErrorKind::ParseError);
  EXPECT_NE(msg.find("A[0][0][1]"), std::string::npos) << msg;
}

TEST(ReadInstance, DimensionMismatch) {
  ErrorKind kind{};
  const auto msg = error_of(general_doc(Json::parse("[[1,0,0],[0,1,0],[0,0,1]]"), Json::array({1.0})), &kind);
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_NE(msg.find("A[0]"), std::string::npos) << msg;
}

TEST(ReadInstance, MissingFieldAndWrongFormat) {
  auto doc = general_doc(Json::parse("[[1,0],[0,1]]"), Json::array({1.0}));
  doc.erase("b");
  EXPECT_NE(error_of(doc).find("b: missing"), std::string::npos);
  doc = general_doc(Json::parse("[[1,0],[0,1]]"), Json::array({1.0}));
  doc["format"] = "psdp-instance/v0";
  EXPECT_NE(error_of(doc).find("format"), std::string::npos);
}

TEST(ReadInstance, ComplexPairsAccepted) {
  const auto a = Json::parse("[[1,[0,0.5]],[[0,-0.5],1]]");
  const auto inst = std::get<PositiveSdpInstance>(io::instance_from_json(general_doc(a, Json::array({1.0}))));
  EXPECT_EQ(inst.A[0](0, 1), Complex(0, 0.5));
  EXPECT_EQ(inst.A[0](1, 0), Complex(0, -0.5));
}

TEST(WriteInstance, IdentityRoundTrip) {
  const auto inst = gen_identity(2, 3);
  const auto back = io::instance_from_json(io::to_json(inst));
  ASSERT_TRUE(std::holds_alternative<SpecialFormInstance>(back));
  EXPECT_EQ(std::get<SpecialFormInstance>(back), inst);
  EXPECT_EQ(io::to_json(inst)["kind"], "special");
}

TEST(WriteInstance, RandomRoundTripIsBitExact) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto inst = gen_random_psd(4, 6, seed);
    const auto text = io::dump(io::to_json(inst));
    const auto back = std::get<PositiveSdpInstance>(io::instance_from_json(Json::parse(text)));
    EXPECT_EQ(back, inst);
    EXPECT_EQ(io::dump(io::to_json(back)), text);
  }
  const auto diag = gen_diagonal(3, 4, 9);
  EXPECT_EQ(std::get<PositiveSdpInstance>(io::instance_from_json(io::to_json(diag))), diag);
}

TEST(GenDiagonal, DeterministicAndCommuting) {
  const auto a = gen_diagonal(3, 4, 7);
  const auto b = gen_diagonal(3, 4, 7);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, gen_diagonal(3, 4, 8));
  for (const auto& x : a.A) {
    EXPECT_EQ(x.off_diagonal_mass(), 0.0);
    for (const auto& y : a.A) EXPECT_EQ((x.matrix() * y.matrix() - y.matrix() * x.matrix()).norm(), 0.0);
    for (Index j = 0; j < 3; ++j) {
      EXPECT_GE(x(j, j).real(), 0.1);
      EXPECT_LE(x(j, j).real(), 2.0);
    }
  }
  for (double v : a.b) {
    EXPECT_GE(v, 0.5);
    EXPECT_LE(v, 2.0);
  }
  EXPECT_NO_THROW(validate(a));
}

TEST(GenRandomPsd, FullAndLowRank) {
  const auto full = gen_random_psd(5, 5, 3, RankProfile::full());
  for (const auto& a : full.A) {
    const auto dec = eigh(a);
    EXPECT_GE(dec.min(), 1e-3 - 1e-12);
    EXPECT_LE(dec.max(), 2.0 + 1e-12);
  }
  EXPECT_GE(lambda_min(full.C), 0.1 - 1e-12);
  const auto low = gen_random_psd(5, 5, 3, RankProfile::low(1));
  for (const auto& a : low.A) {
    const auto dec = eigh(a);
    EXPECT_GT(dec.values[0], 1e-3);
    EXPECT_LT(std::abs(dec.values[1]), 1e-10);
  }
  EXPECT_NO_THROW(validate(full));
  EXPECT_NO_THROW(validate(low));
}

TEST(GenRandomPsd, FixedSeedGivesIdenticalJson) {
  EXPECT_EQ(io::dump(io::to_json(gen_random_psd(4, 8, 42))), io::dump(io::to_json(gen_random_psd(4, 8, 42))));
}

TEST(GenIdentity, SpecialFormValid) {
  const auto inst = gen_identity(2, 3);
  EXPECT_EQ(inst.m(), 3);
  EXPECT_NO_THROW(validate(inst));
  EXPECT_THROW(gen_identity(3, 2), Error);
}

TEST(ValidateSpecial, RequiresMAtLeastN) {
  SpecialFormInstance inst;
  inst.A = {HermitianMatrix::identity(3)};
  try {
    validate(inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
  }
}

TEST(ValidateSpecial, NormAndEigenvalueFloor) {
  SpecialFormInstance inst;
  inst.A = {2.0 * HermitianMatrix::identity(1), HermitianMatrix::identity(1)};
  EXPECT_THROW(validate(inst), Error);
  Vector d(2);
  d << 1.0, 0.01;
  inst.A = {HermitianMatrix::diagonal(d), HermitianMatrix::diagonal(d)};
  inst.gamma = 10;
  EXPECT_THROW(validate(inst), Error);
  inst.gamma = 100;
  EXPECT_NO_THROW(validate(inst));
}

}  // namespace
}  // namespace psdp

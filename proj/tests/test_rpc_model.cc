// __BEGIN_LICENSE__
//  Licensed under the Apache License, Version 2.0 (the "License"); you may
//  not use this file except in compliance with the License. You may obtain a
//  copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.
// __END_LICENSE__

#include "oracles.h"

#include <rpcfit/error.h>
#include <rpcfit/rpc_model.h>
#include <rpcfit/text.h>

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace rpcfit;

namespace {

  PolyCoeffs alternating() {
    PolyCoeffs c;
    for (int k = 0; k < 20; ++k)
      c[k] = (k + 1) / 10.0 * (k % 2 == 0 ? 1.0 : -1.0);
    return c;
  }

  PolyCoeffs from(std::array<double, 20> v) {
    PolyCoeffs c;
    c.c = v;
    return c;
  }

  // Fixed model whose projection was evaluated in exact rational arithmetic.
  RpcModel fixed_model() {
    PolyCoeffs const nr = from({-0.3, -0.2, -0.1, 1.0, 0.1, 0.2, 0.3, -0.3, -0.2, -0.1,
                                0.0, 0.1, 0.2, 0.3, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2});
    PolyCoeffs const dr = from({1.0, -0.01, 0.0, 0.01, 0.02, -0.02, -0.01, 0.0, 0.01, 0.02,
                                -0.02, -0.01, 0.0, 0.01, 0.02, -0.02, -0.01, 0.0, 0.01, 0.02});
    PolyCoeffs const nc = from({-0.25, -0.1, 1.05, 0.2, -0.2, -0.05, 0.1, 0.25, -0.15, 0.0,
                                0.15, -0.25, -0.1, 0.05, 0.2, -0.2, -0.05, 0.1, 0.25, -0.15});
    PolyCoeffs const dc = from({1.0, 0.0, 0.02, -0.02, 0.0, 0.02, -0.02, 0.0, 0.02, -0.02,
                                0.0, 0.02, -0.02, 0.0, 0.02, -0.02, 0.0, 0.02, -0.02, 0.0});
    NormalizationParams const n{{2.35, 0.1}, {48.85, 0.1}, {100.0, 500.0}, {5000.0, 5000.0},
                                {6000.0, 6000.0}};
    return RpcModel(nr, dr, nc, dc, n);
  }

} // namespace

TEST(Monomials, MatchExponentTableOnRandomPoints) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    double const x = u(rng), y = u(rng), z = u(rng);
    Monomials const m = monomials(x, y, z);
    for (int k = 0; k < 20; ++k)
      EXPECT_NEAR(m[static_cast<std::size_t>(k)], oracle::monomial(k, x, y, z), 1e-14) << k;
  }
}

TEST(Monomials, OriginHasOnlyConstantTerm) {
  Monomials const m = monomials(0.0, 0.0, 0.0);
  EXPECT_EQ(m[0], 1.0);
  for (int k = 1; k < 20; ++k)
    EXPECT_EQ(m[static_cast<std::size_t>(k)], 0.0);
}

TEST(EvalPoly, FrozenExactValue) {
  // Exact rational evaluation: -1.5237.
  EXPECT_NEAR(eval_poly(alternating(), 0.3, -0.7, 0.45), -1.5237, 1e-14);
}

TEST(EvalPoly, MatchesOracleWithinTolerance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    PolyCoeffs c;
    for (double& v : c.c)
      v = u(rng);
    double const x = u(rng), y = u(rng), z = u(rng);
    EXPECT_NEAR(eval_poly(c, x, y, z), oracle::poly(c, x, y, z), 1e-12);
    EXPECT_EQ(eval_poly(c, x, y, z), eval_poly(c, monomials(x, y, z)));
  }
}

TEST(EvalPoly, UnitCoefficientsAtOnesSumToTwenty) {
  EXPECT_DOUBLE_EQ(eval_poly(PolyCoeffs::constant(1.0), 1.0, 1.0, 1.0), 1.0);
  PolyCoeffs ones;
  ones.c.fill(1.0);
  EXPECT_DOUBLE_EQ(eval_poly(ones, 1.0, 1.0, 1.0), 20.0);
}

TEST(Normalization, RoundTripsToRelativePrecision) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(-1e4, 1e4), s(1e-3, 1e4);
  for (int i = 0; i < 1000; ++i) {
    double const x = v(rng), off = v(rng), sc = s(rng);
    double const back = denormalize(normalize(x, off, sc), off, sc);
    EXPECT_LE(std::abs(back - x), 1e-12 * std::max({std::abs(x), std::abs(off), 1.0}));
  }
}

TEST(Normalization, RejectsNonPositiveScale) {
  EXPECT_THROW(normalize(1.0, 0.0, 0.0), NonPositiveScale);
  EXPECT_THROW(denormalize(1.0, 0.0, -2.0), NonPositiveScale);
  NormalizationParams n;
  n.alt.scale = 0.0;
  EXPECT_THROW(n.validate(), NonPositiveScale);
}

TEST(Normalization, FromRangeMapsBoundsToUnitInterval) {
  Scaling const s = Scaling::from_range(-513.0, 548.0);
  EXPECT_DOUBLE_EQ(s.normalize(-513.0), -1.0);
  EXPECT_DOUBLE_EQ(s.normalize(548.0), 1.0);
  bool degenerate = false;
  Scaling const d = Scaling::from_range(5.0, 5.0, &degenerate);
  EXPECT_TRUE(degenerate);
  EXPECT_EQ(d.offset, 5.0);
  EXPECT_EQ(d.scale, 1.0);
}

TEST(RpcModel, ProjectMatchesExactRationalEvaluation) {
  ImagePoint const p = fixed_model().project({2.351, 48.862, 120.0});
  EXPECT_NEAR(p.row, 3440.8258023606713, 1e-9);
  EXPECT_NEAR(p.col, 5230.598895640863, 1e-9);
}

TEST(RpcModel, ProjectMatchesOracleOnRandomModels) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    RpcModel const m = oracle::random_rpc(rng, oracle::paris_norm());
    for (int i = 0; i < 20; ++i) {
      GroundPoint const g{2.35 + 0.1 * u(rng), 48.85 + 0.1 * u(rng), 100.0 + 500.0 * u(rng)};
      ImagePoint const a = m.project(g), b = oracle::project(m, g);
      EXPECT_NEAR(a.row, b.row, 1e-8);
      EXPECT_NEAR(a.col, b.col, 1e-8);
    }
  }
}

TEST(RpcModel, OffsetShiftMovesEveryProjectionExactly) {
  RpcModel const m = fixed_model();
  NormalizationParams n = m.norm();
  n.row.offset += 12.5;
  n.col.offset -= 3.25;
  RpcModel const shifted = m.with_norm(n);
  for (double lon : {2.27, 2.35, 2.44}) {
    ImagePoint const a = m.project({lon, 48.8, 50.0}), b = shifted.project({lon, 48.8, 50.0});
    EXPECT_NEAR(b.row - a.row, 12.5, 1e-9);
    EXPECT_NEAR(b.col - a.col, -3.25, 1e-9);
  }
}

TEST(RpcModel, DenominatorNearZeroIsReported) {
  PolyCoeffs den = PolyCoeffs::constant(1.0);
  den[3] = -1.0;   // 1 - X vanishes at X = 1
  PolyCoeffs num;
  num[3] = 1.0;
  RpcModel const m(num, den, num, PolyCoeffs::constant(1.0), oracle::paris_norm());
  try {
    m.project({2.45, 48.85, 100.0});
    FAIL() << "expected DenominatorNearZero";
  } catch (DenominatorNearZero const& e) {
    EXPECT_EQ(e.axis(), "row");
  }
}

TEST(RpcModel, ConstructorValidatesInputs) {
  PolyCoeffs const one = PolyCoeffs::constant(1.0);
  PolyCoeffs bad_den = one;
  bad_den[0] = 2.0;
  EXPECT_THROW(RpcModel(one, bad_den, one, one, oracle::paris_norm()), std::invalid_argument);
  PolyCoeffs nan_num = one;
  nan_num[5] = std::nan("");
  EXPECT_THROW(RpcModel(nan_num, one, one, one, oracle::paris_norm()), std::invalid_argument);
  NormalizationParams n = oracle::paris_norm();
  n.row.scale = -1.0;
  EXPECT_THROW(RpcModel(one, one, one, one, n), NonPositiveScale);
}

TEST(Localize, InvertsProjectionOnRandomModels) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int k = 0; k < 10; ++k) {
    RpcModel const m = oracle::camera_like_rpc(rng, oracle::paris_norm());
    for (int i = 0; i < 10; ++i) {
      GroundPoint const g{2.35 + 0.1 * u(rng), 48.85 + 0.1 * u(rng), 100.0 + 500.0 * u(rng)};
      ImagePoint const px = m.project(g);
      GroundPoint const back = localize(m, px, g.alt);
      ImagePoint const again = m.project(back);
      EXPECT_LE(std::hypot(again.row - px.row, again.col - px.col), 1e-9);
      EXPECT_EQ(back.alt, g.alt);
    }
  }
}

TEST(Localize, ConstantModelDoesNotConverge) {
  PolyCoeffs const one = PolyCoeffs::constant(1.0);
  RpcModel const flat(PolyCoeffs::constant(0.2), one, PolyCoeffs::constant(0.3), one,
                      oracle::paris_norm());
  EXPECT_THROW(localize(flat, {100.0, 100.0}, 0.0), NoConvergence);
}

TEST(RpcFile, RoundTripPreservesModelAndProjections) {
  std::mt19937_64 rng(23);
  RpcModel const m = oracle::random_rpc(rng, oracle::paris_norm());
  std::stringstream s;
  write_rpc(m, s);
  RpcModel const back = read_rpc(s);
  EXPECT_TRUE(back == m);
  for (double lat : {48.76, 48.85, 48.93}) {
    ImagePoint const a = m.project({2.3, lat, 0.0}), b = back.project({2.3, lat, 0.0});
    EXPECT_LE(std::abs(a.row - b.row), 1e-10);
    EXPECT_LE(std::abs(a.col - b.col), 1e-10);
  }
}

TEST(RpcFile, FileRoundTripAndAtomicWrite) {
  auto const dir = oracle::temp_dir("rpcfile");
  RpcModel const m = fixed_model();
  write_rpc_file(m, dir / "m.rpc");
  EXPECT_FALSE(std::filesystem::exists(dir / "m.rpc.partial"));
  EXPECT_TRUE(read_rpc_file(dir / "m.rpc") == m);
  EXPECT_THROW(read_rpc_file(dir / "missing.rpc"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(RpcFile, AcceptsCommentsUnitsAndFortranExponents) {
  std::stringstream s;
  write_rpc(fixed_model(), s);
  std::string text = "# header comment\n\n" + s.str();
  auto const pos = text.find("LINE_OFF: 5000");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 14, "LINE_OFF: +0.5D+04");
  std::stringstream in(text);
  EXPECT_TRUE(read_rpc(in) == fixed_model());
}

TEST(RpcFile, MissingKeyAndBadValues) {
  std::stringstream s;
  write_rpc(fixed_model(), s);
  std::string const text = s.str();

  std::string missing = text;
  auto const start = missing.find("SAMP_DEN_COEFF_7:");
  missing.erase(start, missing.find('\n', start) - start + 1);
  std::stringstream a(missing);
  try {
    read_rpc(a);
    FAIL() << "expected MissingKey";
  } catch (MissingKey const& e) {
    EXPECT_NE(std::string(e.what()).find("SAMP_DEN_COEFF_7"), std::string::npos);
  }

  std::string bad = text;
  auto const v = bad.find("LAT_SCALE:");
  bad.replace(v, bad.find('\n', v) - v, "LAT_SCALE: abc degrees");
  std::stringstream b(bad);
  EXPECT_THROW(read_rpc(b), ParseError);

  std::stringstream c("LINE_OFF 12\n");
  EXPECT_THROW(read_rpc(c), ParseError);
}

TEST(Text, ParseDoubleForms) {
  EXPECT_EQ(parse_double("  1.5 "), 1.5);
  EXPECT_EQ(parse_double("+2e3"), 2000.0);
  EXPECT_EQ(parse_double("1.25D-2"), 0.0125);
  EXPECT_FALSE(parse_double("1.5x"));
  EXPECT_FALSE(parse_double(""));
}

TEST(Text, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double const x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

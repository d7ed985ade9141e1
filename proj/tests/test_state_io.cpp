#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"

using namespace entangle;
using namespace entangle::classify;
using io::ParseError;

namespace {

AnyState round_trip(const AnyState& s) { return io::parse_state(io::dump_state(s)).state; }

int parse_error_line(const std::string& text) {
  try {
    io::parse_state(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string shape_error(const std::string& text) {
  try {
    io::parse_state(text);
  } catch (const ShapeError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(StateIo, RoundTripIsLossless) {
  std::vector<SystemSpec> specs{SystemSpec::fermion(3, 6),
                                SystemSpec::fermion(2, 7),
                                SystemSpec::of(SystemKind::qubit3),
                                SystemSpec::of(SystemKind::boson2q),
                                SystemSpec::of(SystemKind::boson3),
                                SystemSpec::of(SystemKind::qubit_fermion4),
                                SystemSpec::multi(embed::SystemShape({{1, 2}, {2, 4}, {1, 3}}))};
  for (const auto& spec : specs)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const AnyState s = random_state(spec, seed);
      const std::string text = io::dump_state(s);
      EXPECT_EQ(io::dump_state(round_trip(s)), text) << name(spec.kind);
      EXPECT_EQ(kind_of(round_trip(s)), spec.kind);
    }
}

TEST(StateIo, FermionKeysFoldParityAndAcceptBarredAliases) {
  const auto f = io::parse_state(R"({"system": "fermion", "shape": {"k": 3, "n": 6},
    "amplitudes": [{"key": [4, 2, 3], "re": 0.5}, {"key": ["1b", 1, 3], "re": 0.25, "im": 1.0},
                   {"key": [5, "3b", 1], "im": 2.0}]})");
  const auto& p = std::get<fermion::State>(f.state);
  EXPECT_EQ(p.amplitude({1, 2, 3}), cplx(0.5));
  EXPECT_EQ(p.amplitude({0, 2, 3}), cplx(0.25, 1.0));
  EXPECT_EQ(p.amplitude({0, 4, 5}), cplx(0.0, 2.0));
  const auto odd = io::parse_state(R"({"system": "fermion", "shape": {"k": 2, "n": 4}, "amplitudes": [{"key": [2, 1], "re": 1.0}]})");
  EXPECT_EQ(std::get<fermion::State>(odd.state).amplitude({0, 1}), cplx(-1.0));
}

TEST(StateIo, MultiKeysAcceptBareLevelsForSingleParticles) {
  const auto f = io::parse_state(R"({"system": "multi", "shape": {"species": [{"k": 1, "n": 2}, {"k": 2, "n": 4}]},
    "amplitudes": [{"key": [2, [4, 1]], "re": 1.0}]})");
  const auto& m = std::get<embed::MultiState>(f.state);
  EXPECT_EQ(m.amplitude({fermion::ModeSet::of({1}), fermion::ModeSet::of({0, 3})}), cplx(-1.0));
}

TEST(StateIo, QubitFermionKeysAreAntisymmetric) {
  const auto f = io::parse_state(R"({"system": "qubit_fermion4", "amplitudes": [{"key": [1, 2, 1], "re": 1.0}]})");
  EXPECT_EQ(std::get<embed::QubitFermion4State>(f.state)(1, 1, 2), cplx(-1.0));
  EXPECT_NE(shape_error(R"({"system": "qubit_fermion4", "amplitudes": [{"key": [1, 2, 2], "re": 1.0}]})"), "");
  EXPECT_EQ(parse_error_line(R"({"system": "qubit_fermion4", "amplitudes": [
    {"key": [1, 2, 1], "re": 1.0}, {"key": [1, 1, 2], "re": 1.0}]})"), 2);
}

TEST(StateIo, DuplicateKeysAreRejected) {
  const std::string text = R"({"system": "fermion", "shape": {"k": 2, "n": 4},
  "amplitudes": [
    {"key": [1, 2], "re": 1.0},
    {"key": [2, 1], "re": 1.0}
  ]})";
  EXPECT_EQ(parse_error_line(text), 4);
}

TEST(StateIo, ShapeErrorsCarryTheLineOfTheKey) {
  const std::string text = R"({"system": "qubit3",
  "amplitudes": [
    {"key": [0, 0, 0], "re": 1.0},
    {"key": [0, 2, 0], "re": 1.0}
  ]})";
  EXPECT_NE(shape_error(text).find("line 4"), std::string::npos);
  EXPECT_NE(shape_error(R"({"system": "fermion", "shape": {"k": 2, "n": 4}, "amplitudes": [{"key": [1, 5]}]})"), "");
  EXPECT_NE(shape_error(R"({"system": "fermion", "shape": {"k": 2, "n": 4}, "amplitudes": [{"key": [1, 1]}]})"), "");
  EXPECT_NE(shape_error(R"({"system": "fermion", "shape": {"k": "2", "n": 4}, "amplitudes": []})"), "");
  EXPECT_NE(shape_error(R"({"system": "boson3", "amplitudes": [{"key": [4], "re": 1.0}]})"), "");
  EXPECT_NE(shape_error(R"({"system": "multi", "shape": {"species": [{"k": 3, "n": 2}]}, "amplitudes": []})"), "");
}

TEST(StateIo, SyntaxErrorsCarryTheirLine) {
  EXPECT_EQ(parse_error_line("{\n  \"system\": \"qubit3\",\n  \"amplitudes\": [\n    {\"key\": [0, 0, 0] \"re\": 1.0}\n  ]\n}"), 4);
  EXPECT_EQ(parse_error_line(R"({"system": "qutrit", "amplitudes": []})"), 1);
  EXPECT_EQ(parse_error_line(R"({"amplitudes": []})"), 1);
  EXPECT_EQ(parse_error_line("[1, 2]"), 1);
  EXPECT_EQ(parse_error_line("{\n\"system\": \"qubit3\",\n\"amplitudes\": [\n{\"key\": [0, 0, 0], \"re\": \"x\"}]}"), 4);
  // Malformed keys are syntax-level problems; keys that merely do not fit are shape errors.
  EXPECT_EQ(parse_error_line("{\"system\": \"fermion\", \"shape\": {\"k\": 2, \"n\": 4},\n\"amplitudes\": [{\"key\": [1, \"4b\"]}]}"), 2);
  EXPECT_EQ(parse_error_line("{\"system\": \"qubit3\",\n\n\"amplitudes\": [{\"key\": \"000\"}]}"), 3);
  EXPECT_EQ(parse_error_line("{\"system\": \"qubit3\", \"amplitudes\": [{\"key\": [0, 0.5, 0]}]}"), 1);
}

TEST(StateIo, NormCheckWarnsWithoutRejecting) {
  const auto f = io::parse_state(R"({"system": "boson3", "norm_check": true, "amplitudes": [{"key": [1], "re": 1.0}]})");
  ASSERT_EQ(f.warnings.size(), 1u);
  EXPECT_NE(f.warnings[0].find("1.73"), std::string::npos);
  const auto g = io::parse_state(R"({"system": "boson3", "amplitudes": [{"key": [1], "re": 1.0}]})");
  EXPECT_TRUE(g.warnings.empty());
}

TEST(StateIo, MatrixFiles) {
  const auto blocks = io::parse_matrices(R"({"blocks": [[[1, [0, 1]], [0, 2]], [[3]]]})");
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0](0, 1), cplx(0.0, 1.0));
  EXPECT_EQ(blocks[1](0, 0), cplx(3.0));
  EXPECT_EQ(io::parse_matrices(R"([[[1]]])").size(), 1u);
  EXPECT_THROW(io::parse_matrices(R"({"blocks": [[[1, 2], [3]]]})"), ShapeError);
  EXPECT_THROW(io::parse_matrices(R"({"blocks": [[["a"]]]})"), ShapeError);
  EXPECT_THROW(io::parse_matrices(R"({"blocks": 3})"), ParseError);
  std::mt19937_64 rng(1);
  const Eigen::MatrixXcd m = oracle::random_matrix(3, rng);
  EXPECT_EQ(io::parse_matrices(io::dump_matrices({m, m}))[1], m);
}

TEST(StateIo, ShippedCorpusMatchesTheRepresentatives) {
  const std::filesystem::path dir = std::filesystem::path(ENTANGLE_SOURCE_DIR) / "data" / "states";
  for (const auto& rep : reps::table_representatives()) {
    const auto f = io::read_state_file((dir / (rep.stem() + ".json")).string());
    EXPECT_TRUE(f.warnings.empty()) << rep.stem();
    EXPECT_EQ(io::dump_state(f.state, true), io::dump_state(rep.state, true)) << rep.stem();
    EXPECT_EQ(classify_state(f.state).name, rep.expected) << rep.stem();
  }
  const auto p = io::read_state_file((dir / "four_qubit_P.json").string());
  EXPECT_EQ(io::dump_state(p.state), io::dump_state(reps::four_qubit_P()));
  EXPECT_THROW(io::read_state_file((dir / "missing.json").string()), ParseError);
}

TEST(StateIo, LabelRecord) {
  const auto j = io::label_to_json(classify_state(reps::four_qubit_P()));
  EXPECT_TRUE(j["rank"].is_null());
  EXPECT_EQ(j["name"], "biseparable");
  EXPECT_EQ(j["cut_pattern"].size(), 3u);
}

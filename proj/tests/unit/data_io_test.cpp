#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "seqattract/data_io.hpp"
#include "seqattract/errors.hpp"
#include "seqattract/experiments.hpp"

namespace seqattract {
namespace {

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) out.push_back(static_cast<std::uint8_t>(std::stoi(std::string(hex.substr(i, 2)), nullptr, 16)));
  return out;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("seqattract_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

// Byte layouts below were produced independently with python struct/zlib.
constexpr std::string_view kSequenceHex = "5345514131030000000300000001010001000001010001";
constexpr std::string_view kCheckpointHex =
    "5341544e310200000001000000000000000000e03f000000000000f0bf000000000000d03f0000000000000040000000000000f03f"
    "000000000000e0bf00000000000000c000000000000000000000000000000c40af45c5de";

HiddenNetwork checkpoint_fixture() {
  RowMatrix U(1, 2), V(2, 1), P(1, 2);
  U << 0.5, -1.0;
  V << 0.25, 2.0;
  P << 1.0, -0.5;
  Eigen::VectorXd bh(1), bv(2);
  bh << -2.0;
  bv << 0.0, 3.5;
  return HiddenNetwork(U, V, P, bh, bv);
}

TEST(SequenceFormat, ByteExactOracle) {
  const auto seq = PatternSequence::from_strings({"+-+", "--+", "+-+"});
  EXPECT_EQ(encode_sequence(seq), from_hex(kSequenceHex));
  EXPECT_EQ(decode_sequence(from_hex(kSequenceHex)), seq);
}

TEST(SequenceFormat, RoundTripsRandomSequences) {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t t = 2 + rng() % 12;
    if (n < 4 && t - 1 > (std::size_t{1} << n)) continue;
    auto seq = gen_random_periodic_sequence(n, t, rng);
    if (rep % 2) seq = PatternSequence(std::vector<BipolarVector>(seq.patterns().begin(), seq.patterns().end() - 1), false);
    EXPECT_EQ(decode_sequence(encode_sequence(seq)), seq);
  }
}

TEST(SequenceFormat, ReportsMalformedInput) {
  auto bytes = from_hex(kSequenceHex);
  EXPECT_THROW(decode_sequence(std::span(bytes).first(bytes.size() - 1)), TruncatedError);
  EXPECT_THROW(decode_sequence(std::span(bytes).first(7)), TruncatedError);
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(decode_sequence(extra), FormatError);
  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(decode_sequence(magic), FormatError);
  auto illegal = bytes;
  illegal[15] = 2;
  try {
    decode_sequence(illegal);
    FAIL();
  } catch (const IllegalValueError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 15"), std::string::npos) << e.what();
  }
  auto flag = bytes;
  flag[13] = 7;
  EXPECT_THROW(decode_sequence(flag), IllegalValueError);
  auto not_periodic = bytes;
  not_periodic[20] = 0;  // last row no longer equals the first
  EXPECT_THROW(decode_sequence(not_periodic), IllegalValueError);
}

TEST(CheckpointFormat, ByteExactOracle) {
  const auto net = checkpoint_fixture();
  const auto bytes = encode_checkpoint(net);
  EXPECT_EQ(bytes.size(), 89u);
  EXPECT_EQ(bytes, from_hex(kCheckpointHex));
  EXPECT_EQ(decode_checkpoint(bytes), net);
}

TEST(CheckpointFormat, RoundTripIsBitExact) {
  Rng rng(12);
  const auto net = HiddenNetwork::random(17, 9, 0.37, rng);
  EXPECT_EQ(decode_checkpoint(encode_checkpoint(net)), net);
}

TEST(CheckpointFormat, ReportsCorruption) {
  const auto bytes = from_hex(kCheckpointHex);
  EXPECT_THROW(decode_checkpoint(std::span(bytes).first(40)), TruncatedError);
  auto extra = bytes;
  extra.push_back(1);
  EXPECT_THROW(decode_checkpoint(extra), ShapeError);
  auto flipped = bytes;
  flipped[30] ^= 0x01;
  EXPECT_THROW(decode_checkpoint(flipped), ChecksumError);
}

TEST(Formats, FuzzedBytesNeverCrash) {
  Rng rng(99);
  const std::vector<std::vector<std::uint8_t>> seeds{from_hex(kSequenceHex), from_hex(kCheckpointHex)};
  for (int rep = 0; rep < 2000; ++rep) {
    auto bytes = seeds[rep % 2];
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      switch (rng() % 3) {
        case 0: bytes[rng() % bytes.size()] = static_cast<std::uint8_t>(rng()); break;
        case 1: bytes.resize(rng() % (bytes.size() + 1)); break;
        default: bytes.push_back(static_cast<std::uint8_t>(rng())); break;
      }
      if (bytes.empty()) bytes.push_back(0);
    }
    try {
      if (rep % 2) decode_checkpoint(bytes);
      else decode_sequence(bytes);
    } catch (const Error&) {
    }
  }
}

TEST_F(TempDir, FilesRoundTripAndMissingFileNamesPath) {
  const auto seq = PatternSequence::from_strings({"++-", "-+-", "++-"});
  save_sequence(seq, dir_ / "s.seqa");
  EXPECT_EQ(load_sequence(dir_ / "s.seqa"), seq);
  save_checkpoint(checkpoint_fixture(), dir_ / "n.satn");
  EXPECT_EQ(load_checkpoint(dir_ / "n.satn"), checkpoint_fixture());
  try {
    load_sequence(dir_ / "missing.seqa");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.seqa"), std::string::npos);
  }
  write_file(dir_ / "bad.satn", from_hex("5341544e31"));
  EXPECT_THROW(load_checkpoint(dir_ / "bad.satn"), TruncatedError);
}

TEST(Binarize, ThresholdRule) {
  const std::vector<GrayFrame> zeros{{2, 2, {0, 0, 0, 0}}};
  EXPECT_EQ(binarize_frames(zeros)[0], BipolarVector::ones(4).negated());
  const std::vector<GrayFrame> edge{{2, 1, {128, 127}}};
  EXPECT_EQ(binarize_frames(edge)[0], (BipolarVector{1, -1}));
  const std::vector<GrayFrame> checker{{2, 2, {255, 0, 0, 255}}};
  EXPECT_EQ(binarize_frames(checker)[0], (BipolarVector{1, -1, -1, 1}));
}

TEST(Binarize, PeriodicityAndErrors) {
  const GrayFrame a{2, 1, {200, 0}}, b{2, 1, {0, 200}};
  const std::vector<GrayFrame> cyc{a, b, a};
  EXPECT_TRUE(binarize_frames(cyc).periodic());
  const std::vector<GrayFrame> open{a, b};
  EXPECT_FALSE(binarize_frames(open).periodic());
  const std::vector<GrayFrame> ragged{a, GrayFrame{1, 2, {0, 0}}};
  EXPECT_THROW(binarize_frames(ragged), ShapeError);
  EXPECT_THROW(binarize_frames(open, 300), PreconditionError);
  EXPECT_THROW(binarize_frames(std::span<const GrayFrame>{}), PreconditionError);
}

TEST_F(TempDir, GraymapRoundTripAndComments) {
  const std::vector<GrayFrame> frames{{3, 2, {0, 10, 20, 30, 40, 255}}, {3, 2, {5, 5, 5, 5, 5, 5}}};
  save_pgm_frames(frames, dir_ / "f.pgm");
  const auto back = load_pgm_frames(dir_ / "f.pgm");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].pixels, frames[0].pixels);
  EXPECT_EQ(back[1].width, 3u);
  const std::string text = "P5\n# comment\n2 1\n255\n";
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  bytes.push_back(7);
  bytes.push_back(9);
  const auto parsed = decode_pgm_frames(bytes);
  EXPECT_EQ(parsed[0].pixels, (std::vector<std::uint8_t>{7, 9}));
  bytes.pop_back();
  EXPECT_THROW(decode_pgm_frames(bytes), TruncatedError);
}

TEST(Csv, RenderQuotesAndChecksWidth) {
  CsvTable t({"a", "b"});
  t.add_row({"1", "x,y"});
  t.add_row({"2", "say \"hi\""});
  EXPECT_EQ(t.render(), "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(t.add_row({"3"}), ShapeError);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Manifest, SortedKeysWithoutTimestamps) {
  RunManifest m;
  m.command = "sweep";
  m.seed = 7;
  m.settings["b"] = "2";
  m.settings["a"] = "1";
  const std::string text = render_manifest(m);
  EXPECT_EQ(text, render_manifest(m));
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["command"], "sweep");
  EXPECT_EQ(j["hyperparams"]["kappa"], 1.0);
  EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
  EXPECT_EQ(text.find("time"), std::string::npos);
}

}  // namespace
}  // namespace seqattract

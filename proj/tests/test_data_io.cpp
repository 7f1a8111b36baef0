#include <cmath>
#include <cstring>
#include <random>
#include <cstdint>
#include <fstream>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "proto_curriculum/embedding.hpp"
#include "proto_curriculum/io.hpp"
#include "test_support.hpp"

using namespace proto_curriculum;
using test_support::TempDir;

namespace {

void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& b) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <class T>
void append_le(std::vector<unsigned char>& b, T v) {
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    b.insert(b.end(), raw, raw + sizeof(T));  // test host is little-endian
}

std::vector<unsigned char> embedding_header(std::uint64_t n, std::uint32_t dim) {
    std::vector<unsigned char> b{'P', 'R', 'O', 'T', 'O', 'E', 'M', 'B'};
    append_le<std::uint32_t>(b, 1);
    append_le<std::uint64_t>(b, n);
    append_le<std::uint32_t>(b, dim);
    append_le<std::uint32_t>(b, 0);
    return b;
}

}  // namespace

TEST(Embeddings, DecodesHandWrittenBinaryFile) {
    TempDir dir("io");
    auto bytes = embedding_header(3, 2);
    for (float v : {1.0f, 2.0f, 3.0f, 4.0f, 5.0f, 6.0f}) append_le(bytes, v);
    write_bytes(dir / "e.bin", bytes);

    const auto m = load_embeddings(dir / "e.bin", EmbeddingFormat::binary);
    EXPECT_EQ(m.n_samples(), 3u);
    EXPECT_EQ(m.dim(), 2u);
    EXPECT_EQ(std::vector<float>(m.data().begin(), m.data().end()), (std::vector<float>{1, 2, 3, 4, 5, 6}));
    EXPECT_EQ(m.row(2)[1], 6.0f);
}

TEST(Embeddings, HeaderLayoutIs28Bytes) {
    TempDir dir("io");
    const EmbeddingMatrix m(1, 1, {7.5f});
    save_embeddings_binary(dir / "e.bin", m);
    const auto bytes = read_bytes(dir / "e.bin");
    auto expected = embedding_header(1, 1);
    append_le(expected, 7.5f);
    EXPECT_EQ(bytes, expected);
}

TEST(Embeddings, ParsesCsv) {
    const auto m = parse_embeddings_csv("1.0,2.0\n3.0,4.0");
    EXPECT_EQ(m.n_samples(), 2u);
    EXPECT_EQ(m.dim(), 2u);
    EXPECT_EQ(std::vector<float>(m.data().begin(), m.data().end()), (std::vector<float>{1, 2, 3, 4}));
}

TEST(Embeddings, CsvToleratesCrlfAndBlankLines) {
    const auto m = parse_embeddings_csv("1, 2\r\n\r\n3 ,4\r\n");
    EXPECT_EQ(m.n_samples(), 2u);
    EXPECT_EQ(m.row(1)[0], 3.0f);
}

TEST(Embeddings, HeaderClaimingMoreRowsIsLengthMismatch) {
    TempDir dir("io");
    auto bytes = embedding_header(5, 2);
    for (int i = 0; i < 8; ++i) append_le(bytes, 1.0f);  // 4 rows
    write_bytes(dir / "e.bin", bytes);
    EXPECT_THROW(load_embeddings(dir / "e.bin", EmbeddingFormat::binary), LengthMismatchError);
}

TEST(Embeddings, TrailingBytesAreLengthMismatch) {
    TempDir dir("io");
    auto bytes = embedding_header(1, 1);
    append_le(bytes, 1.0f);
    append_le(bytes, 2.0f);
    write_bytes(dir / "e.bin", bytes);
    EXPECT_THROW(load_embeddings(dir / "e.bin", EmbeddingFormat::binary), LengthMismatchError);
}

TEST(Embeddings, MalformedHeaderNamesField) {
    TempDir dir("io");
    auto bytes = embedding_header(1, 1);
    bytes[8] = 9;  // version
    append_le(bytes, 1.0f);
    write_bytes(dir / "v.bin", bytes);
    try {
        load_embeddings(dir / "v.bin", EmbeddingFormat::binary);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
    }

    auto reserved = embedding_header(1, 1);
    reserved[24] = 1;
    append_le(reserved, 1.0f);
    write_bytes(dir / "r.bin", reserved);
    try {
        load_embeddings(dir / "r.bin", EmbeddingFormat::binary);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("reserved"), std::string::npos);
    }

    auto dim0 = embedding_header(1, 0);
    write_bytes(dir / "d.bin", dim0);
    EXPECT_THROW(load_embeddings(dir / "d.bin", EmbeddingFormat::binary), FormatError);

    write_bytes(dir / "m.bin", {'N', 'O', 'P', 'E'});
    EXPECT_THROW(load_embeddings(dir / "m.bin", EmbeddingFormat::binary), FormatError);
}

TEST(Embeddings, NonFiniteValueReportsRow) {
    TempDir dir("io");
    auto bytes = embedding_header(3, 1);
    append_le(bytes, 0.0f);
    append_le(bytes, 0.0f);
    append_le(bytes, std::numeric_limits<float>::quiet_NaN());
    write_bytes(dir / "e.bin", bytes);
    try {
        load_embeddings(dir / "e.bin", EmbeddingFormat::binary);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
    EXPECT_THROW(parse_embeddings_csv("1,inf\n"), ValidationError);
    EXPECT_THROW(parse_embeddings_csv("1,1e300\n"), ValidationError);  // overflows float32
}

TEST(Embeddings, CsvErrors) {
    EXPECT_THROW(parse_embeddings_csv("1,2\n3\n"), FormatError);
    EXPECT_THROW(parse_embeddings_csv("1,abc\n"), FormatError);
    EXPECT_THROW(parse_embeddings_csv("1,,2\n"), FormatError);
    EXPECT_THROW(parse_embeddings_csv("\n\n"), FormatError);
}

TEST(Embeddings, MissingFileIsIoError) {
    EXPECT_THROW(load_embeddings("/nonexistent/embeddings.bin", EmbeddingFormat::binary), IoError);
}

TEST(Embeddings, InvariantsEnforcedOnConstruction) {
    EXPECT_THROW(EmbeddingMatrix(0, 1, {}), ValidationError);
    EXPECT_THROW(EmbeddingMatrix(2, 2, {1, 2, 3}), LengthMismatchError);
    EXPECT_THROW(EmbeddingMatrix(2, 1, {1, 2}, std::vector<std::string>{"a", "a"}), ValidationError);
    EXPECT_NO_THROW(EmbeddingMatrix(2, 1, {1, 2}, std::vector<std::string>{"a", "b"}));
}

// Binary round trip is bit-exact, and the CSV path reproduces the same
// float32 matrix because values are written in shortest round-trip form.
TEST(Embeddings, BinaryAndCsvRoundTripsAgree) {
    TempDir dir("io");
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> size(1, 12);
        const std::size_t n = size(gen);
        const std::size_t d = size(gen);
        std::normal_distribution<float> v(0.0f, 100.0f);
        std::vector<float> data(n * d);
        for (auto& x : data) x = v(gen);
        const EmbeddingMatrix m(n, d, data);

        save_embeddings_binary(dir / "e.bin", m);
        save_embeddings_csv(dir / "e.csv", m);
        const auto from_bin = load_embeddings(dir / "e.bin", EmbeddingFormat::binary);
        const auto from_csv = load_embeddings(dir / "e.csv", EmbeddingFormat::csv);
        EXPECT_EQ(from_bin, m);
        EXPECT_EQ(from_csv, from_bin);
    }
}

TEST(Synthetic, DeterministicForFixedSeed) {
    const SyntheticSpec spec{2, 100, 2, 20.0, 0.5, 7};
    const auto a = generate_synthetic(spec);
    const auto b = generate_synthetic(spec);
    ASSERT_EQ(a.data().size(), b.data().size());
    EXPECT_EQ(std::memcmp(a.data().data(), b.data().data(), a.data().size_bytes()), 0);
    EXPECT_EQ(a.n_samples(), 200u);

    SyntheticSpec other = spec;
    other.seed = 8;
    EXPECT_FALSE(generate_synthetic(other) == a);
}

TEST(Synthetic, PointsStayNearTheirCentroid) {
    const SyntheticSpec spec{3, 50, 8, 50.0, 0.1, 3};
    const auto m = generate_synthetic(spec);
    double worst = 0.0;
    for (std::size_t i = 0; i < m.n_samples(); ++i) {
        const auto mu = synthetic_centroid(spec, synthetic_label(spec, i));
        double sq = 0.0;
        for (std::size_t j = 0; j < spec.dim; ++j) sq += std::pow(m.row(i)[j] - mu[j], 2);
        worst = std::max(worst, std::sqrt(sq));
    }
    EXPECT_LT(worst, spec.separation / 2);
    EXPECT_LT(worst, 10 * spec.spread * std::sqrt(double(spec.dim)));
}

TEST(Synthetic, CentroidsAreSeparatedEvenBeyondDim) {
    const SyntheticSpec spec{7, 1, 3, 4.0, 1.0, 0};
    for (std::size_t a = 0; a < spec.n_clusters; ++a) {
        for (std::size_t b = a + 1; b < spec.n_clusters; ++b) {
            const auto ma = synthetic_centroid(spec, a);
            const auto mb = synthetic_centroid(spec, b);
            double sq = 0.0;
            for (std::size_t j = 0; j < spec.dim; ++j) sq += (ma[j] - mb[j]) * (ma[j] - mb[j]);
            EXPECT_GE(std::sqrt(sq), spec.separation - 1e-12) << a << " vs " << b;
        }
    }
}

TEST(Synthetic, RejectsBadSpec) {
    EXPECT_THROW(generate_synthetic({2, 10, 2, 5.0, 0.0, 1}), ConfigError);
    EXPECT_THROW(generate_synthetic({2, 10, 2, -1.0, 1.0, 1}), ConfigError);
    EXPECT_THROW(generate_synthetic({0, 10, 2, 1.0, 1.0, 1}), ConfigError);
}

TEST(Normalize, RowsGetUnitNorm) {
    const EmbeddingMatrix m(3, 2, {3, 4, 0, 0, -2, 0});
    const auto n = l2_normalize(m);
    EXPECT_FLOAT_EQ(n.row(0)[0], 0.6f);
    EXPECT_FLOAT_EQ(n.row(0)[1], 0.8f);
    EXPECT_EQ(n.row(1)[0], 0.0f);
    EXPECT_FLOAT_EQ(n.row(2)[0], -1.0f);
}

TEST(Indices, RoundTrip) {
    TempDir dir("io");
    const std::vector<std::uint64_t> idx{0, 5, 2, 2};
    save_indices(dir / "i.idx", idx);
    EXPECT_EQ(load_indices(dir / "i.idx"), idx);

    save_indices(dir / "empty.idx", std::vector<std::uint64_t>{});
    EXPECT_TRUE(load_indices(dir / "empty.idx").empty());
    EXPECT_EQ(read_bytes(dir / "empty.idx").size(), 20u);
}

TEST(Indices, WrongMagicIsFormatError) {
    TempDir dir("io");
    save_indices(dir / "i.idx", std::vector<std::uint64_t>{1, 2});
    auto bytes = read_bytes(dir / "i.idx");
    bytes[5] = 'X';
    write_bytes(dir / "bad.idx", bytes);
    EXPECT_THROW(load_indices(dir / "bad.idx"), FormatError);
}

TEST(Indices, IoErrorsCarryPath) {
    try {
        load_indices("/nonexistent/dir/e.idx");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/e.idx"), std::string::npos);
    }
    EXPECT_THROW(save_indices("/nonexistent/dir/e.idx", std::vector<std::uint64_t>{}), IoError);
}

TEST(ModelBlocks, CentroidAndAssignmentRoundTrip) {
    TempDir dir("io");
    ClusterModel m;
    m.k = 2;
    m.dim = 3;
    m.centroids = {1, 2, 3, -4, 5.5f, 6};
    m.assignments = {0, 1, 1, 0, 1};
    save_centroids(dir / "c.bin", m);
    save_assignments(dir / "a.bin", m.assignments);
    const auto c = load_centroids(dir / "c.bin");
    EXPECT_EQ(c.k, 2u);
    EXPECT_EQ(c.dim, 3u);
    EXPECT_EQ(c.values, m.centroids);
    EXPECT_EQ(load_assignments(dir / "a.bin"), m.assignments);
    // PROTOASN has no version field: 8 magic + 8 count + 4 per id
    EXPECT_EQ(read_bytes(dir / "a.bin").size(), 8u + 8u + 4u * 5u);
    EXPECT_EQ(read_bytes(dir / "c.bin").size(), 8u + 12u + 4u * 6u);
}

TEST(Scores, BinaryRoundTripAndLayout) {
    TempDir dir("io");
    PrototypicalityScores s;
    s.normalized = {0.0f, 1.0f, 0.25f};
    s.raw = {0.5f, 2.0f, 0.875f};
    s.cluster_of = {0, 0, 1};
    save_scores(dir / "s.bin", s);
    const auto back = load_scores(dir / "s.bin");
    EXPECT_EQ(back.normalized, s.normalized);
    EXPECT_EQ(back.raw, s.raw);
    EXPECT_EQ(back.cluster_of, s.cluster_of);
    EXPECT_EQ(read_bytes(dir / "s.bin").size(), 8u + 4u + 8u + 12u * 3u);
}

TEST(Scores, OutOfRangeScoreRejected) {
    TempDir dir("io");
    PrototypicalityScores s;
    s.normalized = {1.5f};
    s.raw = {0.0f};
    s.cluster_of = {0};
    save_scores(dir / "s.bin", s);
    EXPECT_THROW(load_scores(dir / "s.bin"), ValidationError);
}

#ifndef PROTO_CURRICULUM_IO_HPP
#define PROTO_CURRICULUM_IO_HPP

// Binary and CSV artifact formats. All integers and floats are little-endian.
//
//   embeddings  "PROTOEMB" u32 version=1, u64 n_samples, u32 dim, u32 reserved=0,
//               n_samples*dim f32 row-major
//   indices     "PROTOIDX" u32 version=1, u64 count, count u64
//   centroids   "PROTOCEN" u32 version=1, u32 k, u32 dim, k*dim f32
//   assignments "PROTOASN" u64 n, n u32
//   scores      "PROTOSCR" u32 version=1, u64 n, n x (f32 normalized, f32 raw, u32 cluster)

#include <bit>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "embedding.hpp"
#include "errors.hpp"
#include "kmeans.hpp"
#include "prototypicality.hpp"

namespace proto_curriculum {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::string_view kEmbeddingMagic = "PROTOEMB";
inline constexpr std::string_view kIndexMagic = "PROTOIDX";
inline constexpr std::string_view kCentroidMagic = "PROTOCEN";
inline constexpr std::string_view kAssignmentMagic = "PROTOASN";
inline constexpr std::string_view kScoreMagic = "PROTOSCR";

enum class EmbeddingFormat { binary, csv };

inline EmbeddingFormat parse_embedding_format(std::string_view s) {
    if (s == "binary") return EmbeddingFormat::binary;
    if (s == "csv") return EmbeddingFormat::csv;
    throw ConfigError("unknown embedding format '" + std::string(s) + "' (expected binary or csv)");
}

namespace detail {

class ByteWriter {
public:
    void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }

    template <class T>
    void put(T value) {
        static_assert(sizeof(T) == 4 || sizeof(T) == 8);
        using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
        const U bits = std::bit_cast<U>(value);
        for (std::size_t b = 0; b < sizeof(T); ++b) bytes_.push_back(static_cast<unsigned char>(bits >> (8 * b)));
    }

    const std::vector<unsigned char>& bytes() const { return bytes_; }

private:
    std::vector<unsigned char> bytes_;
};

class ByteReader {
public:
    ByteReader(std::vector<unsigned char> bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

    void expect_magic(std::string_view m) {
        if (bytes_.size() < m.size() || std::memcmp(bytes_.data(), m.data(), m.size()) != 0) {
            throw FormatError(path_ + ": bad magic (expected " + std::string(m) + ")");
        }
        pos_ = m.size();
    }

    template <class T>
    T get(std::string_view field) {
        static_assert(sizeof(T) == 4 || sizeof(T) == 8);
        if (remaining() < sizeof(T)) {
            throw LengthMismatchError(path_ + ": file truncated while reading " + std::string(field));
        }
        using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
        U bits = 0;
        for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(bytes_[pos_ + b]) << (8 * b);
        pos_ += sizeof(T);
        return std::bit_cast<T>(bits);
    }

    void expect_version() {
        const auto v = get<std::uint32_t>("version");
        if (v != kFormatVersion) {
            throw FormatError(path_ + ": unsupported version " + std::to_string(v) + " in field 'version'");
        }
    }

    // Payload must hold exactly count * record_size more bytes.
    void expect_payload(std::uint64_t count, std::size_t record_size, std::string_view what) {
        const std::uint64_t have = remaining();
        if (count > std::numeric_limits<std::uint64_t>::max() / record_size || have != count * record_size) {
            throw LengthMismatchError(path_ + ": header declares " + std::to_string(count) + " " + std::string(what) +
                                      " but payload holds " + std::to_string(have) + " bytes (expected " +
                                      std::to_string(count * record_size) + ")");
        }
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    const std::string& path() const { return path_; }

private:
    std::vector<unsigned char> bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(path.string() + ": read failed");
    return bytes;
}

inline void write_file(const std::filesystem::path& path, std::span<const unsigned char> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path.string() + ": write failed");
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline void save_embeddings_binary(const std::filesystem::path& path, const EmbeddingMatrix& m) {
    detail::ByteWriter w;
    w.magic(kEmbeddingMagic);
    w.put<std::uint32_t>(kFormatVersion);
    w.put<std::uint64_t>(m.n_samples());
    w.put<std::uint32_t>(static_cast<std::uint32_t>(m.dim()));
    w.put<std::uint32_t>(0);
    for (float v : m.data()) w.put(v);
    detail::write_file(path, w.bytes());
}

inline EmbeddingMatrix load_embeddings_binary(const std::filesystem::path& path) {
    detail::ByteReader r(detail::read_file(path), path.string());
    r.expect_magic(kEmbeddingMagic);
    r.expect_version();
    const auto n = r.get<std::uint64_t>("n_samples");
    const auto dim = r.get<std::uint32_t>("dim");
    const auto reserved = r.get<std::uint32_t>("reserved");
    if (n == 0) throw FormatError(path.string() + ": field 'n_samples' is zero");
    if (dim == 0) throw FormatError(path.string() + ": field 'dim' is zero");
    if (reserved != 0) throw FormatError(path.string() + ": field 'reserved' must be zero");
    if (n > std::numeric_limits<std::uint64_t>::max() / dim) {
        throw FormatError(path.string() + ": fields 'n_samples' x 'dim' overflow");
    }
    r.expect_payload(n * dim, sizeof(float), "floats");
    std::vector<float> data(n * dim);
    for (auto& v : data) v = r.get<float>("data");
    return EmbeddingMatrix(n, dim, std::move(data));
}

// Rows of comma-separated decimals, no header. Values are parsed as double
// and narrowed to float32.
inline EmbeddingMatrix parse_embeddings_csv(std::string_view text, const std::string& origin = "<csv>") {
    std::vector<float> data;
    std::size_t dim = 0;
    std::size_t rows = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t cols = 0;
        while (true) {
            const auto comma = line.find(',');
            const std::string_view cell = detail::trim(line.substr(0, comma));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw FormatError(origin + ": row " + std::to_string(rows) + " column " + std::to_string(cols) +
                                  " is not a number: '" + std::string(cell) + "'");
            }
            if (!std::isfinite(v) || !std::isfinite(static_cast<float>(v))) {
                throw ValidationError(origin + ": non-finite value at row " + std::to_string(rows));
            }
            data.push_back(static_cast<float>(v));
            ++cols;
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            dim = cols;
        } else if (cols != dim) {
            throw FormatError(origin + ": row " + std::to_string(rows) + " has " + std::to_string(cols) +
                              " columns, expected " + std::to_string(dim));
        }
        ++rows;
    }
    if (rows == 0) throw FormatError(origin + ": no rows");
    return EmbeddingMatrix(rows, dim, std::move(data));
}

inline EmbeddingMatrix load_embeddings_csv(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    return parse_embeddings_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                                path.string());
}

inline void save_embeddings_csv(const std::filesystem::path& path, const EmbeddingMatrix& m) {
    std::string text;
    char buf[64];
    for (std::size_t i = 0; i < m.n_samples(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (j) text.push_back(',');
            // shortest repr that round-trips the float32 value
            const auto res = std::to_chars(buf, buf + sizeof(buf), m.row(i)[j]);
            text.append(buf, res.ptr);
        }
        text.push_back('\n');
    }
    detail::write_file(path, std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

inline EmbeddingMatrix load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
    if (!std::filesystem::exists(path)) throw IoError(path.string() + ": no such file");
    return format == EmbeddingFormat::binary ? load_embeddings_binary(path) : load_embeddings_csv(path);
}

inline void save_indices(const std::filesystem::path& path, std::span<const std::uint64_t> indices) {
    detail::ByteWriter w;
    w.magic(kIndexMagic);
    w.put<std::uint32_t>(kFormatVersion);
    w.put<std::uint64_t>(indices.size());
    for (auto i : indices) w.put(i);
    detail::write_file(path, w.bytes());
}

inline std::vector<std::uint64_t> load_indices(const std::filesystem::path& path) {
    detail::ByteReader r(detail::read_file(path), path.string());
    r.expect_magic(kIndexMagic);
    r.expect_version();
    const auto count = r.get<std::uint64_t>("count");
    r.expect_payload(count, sizeof(std::uint64_t), "indices");
    std::vector<std::uint64_t> out(count);
    for (auto& i : out) i = r.get<std::uint64_t>("index");
    return out;
}

inline void save_centroids(const std::filesystem::path& path, const ClusterModel& m) {
    detail::ByteWriter w;
    w.magic(kCentroidMagic);
    w.put<std::uint32_t>(kFormatVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(m.k));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(m.dim));
    for (float v : m.centroids) w.put(v);
    detail::write_file(path, w.bytes());
}

struct CentroidBlock {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<float> values;
};

inline CentroidBlock load_centroids(const std::filesystem::path& path) {
    detail::ByteReader r(detail::read_file(path), path.string());
    r.expect_magic(kCentroidMagic);
    r.expect_version();
    CentroidBlock b;
    b.k = r.get<std::uint32_t>("k");
    b.dim = r.get<std::uint32_t>("dim");
    if (b.k == 0) throw FormatError(path.string() + ": field 'k' is zero");
    if (b.dim == 0) throw FormatError(path.string() + ": field 'dim' is zero");
    r.expect_payload(static_cast<std::uint64_t>(b.k) * b.dim, sizeof(float), "centroid values");
    b.values.resize(b.k * b.dim);
    for (auto& v : b.values) {
        v = r.get<float>("centroid");
        if (!std::isfinite(v)) throw ValidationError(path.string() + ": non-finite centroid value");
    }
    return b;
}

inline void save_assignments(const std::filesystem::path& path, std::span<const std::uint32_t> assignments) {
    detail::ByteWriter w;
    w.magic(kAssignmentMagic);
    w.put<std::uint64_t>(assignments.size());
    for (auto a : assignments) w.put(a);
    detail::write_file(path, w.bytes());
}

inline std::vector<std::uint32_t> load_assignments(const std::filesystem::path& path) {
    detail::ByteReader r(detail::read_file(path), path.string());
    r.expect_magic(kAssignmentMagic);
    const auto n = r.get<std::uint64_t>("n");
    r.expect_payload(n, sizeof(std::uint32_t), "assignments");
    std::vector<std::uint32_t> out(n);
    for (auto& a : out) a = r.get<std::uint32_t>("assignment");
    return out;
}

inline void save_scores(const std::filesystem::path& path, const PrototypicalityScores& s) {
    detail::ByteWriter w;
    w.magic(kScoreMagic);
    w.put<std::uint32_t>(kFormatVersion);
    w.put<std::uint64_t>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        w.put(s.normalized[i]);
        w.put(s.raw[i]);
        w.put(s.cluster_of[i]);
    }
    detail::write_file(path, w.bytes());
}

// Reads the per-sample columns; per-cluster extrema live in the JSON sidecar.
inline PrototypicalityScores load_scores(const std::filesystem::path& path) {
    detail::ByteReader r(detail::read_file(path), path.string());
    r.expect_magic(kScoreMagic);
    r.expect_version();
    const auto n = r.get<std::uint64_t>("n");
    if (n == 0) throw FormatError(path.string() + ": field 'n' is zero");
    r.expect_payload(n, 12, "score records");
    PrototypicalityScores s;
    s.normalized.resize(n);
    s.raw.resize(n);
    s.cluster_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.normalized[i] = r.get<float>("normalized");
        s.raw[i] = r.get<float>("raw");
        s.cluster_of[i] = r.get<std::uint32_t>("cluster");
    }
    s.validate();
    return s;
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_IO_HPP

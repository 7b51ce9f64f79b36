// Serialization: locale-independent numeric formatting, the columnar
// sample CSV, and the compact binary sample cache.
#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "phantomlab/empirics.hpp"

namespace phantomlab::io {

/// Shortest-exact decimal for integers, 17 significant digits for floats;
/// always '.' as decimal separator regardless of locale.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// FNV-1a over a byte string; used for config hashes and cache keys.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

/// Columnar CSV: one (replica, checkpoint, max_value) row per cell.
inline void write_samples_csv(std::ostream& os, const empirics::MaxSampleMatrix& samples) {
    os << "replica,checkpoint,max_value\n";
    const auto& cps = samples.checkpoints();
    for (std::size_t r = 0; r < samples.replicas(); ++r)
        for (std::size_t k = 0; k < cps.size(); ++k)
            os << r << ',' << cps[k] << ',' << format_double(samples.at(r, k)) << '\n';
}

inline constexpr char kCacheMagic[8] = {'P', 'L', 'M', 'A', 'X', '0', '1', '\n'};

/// Cache key from the sample matrix identity (model id, seed, checkpoint grid).
inline std::uint64_t cache_key(const empirics::MaxSampleMatrix& samples) {
    std::string key = samples.provenance().model_id;
    key += '|';
    key += samples.provenance().start;
    key += '|';
    key += std::to_string(samples.provenance().root_seed);
    for (auto n : samples.checkpoints()) {
        key += ',';
        key += std::to_string(n);
    }
    return fnv1a64(key);
}

inline void write_sample_cache(const std::string& path,
                               const empirics::MaxSampleMatrix& samples) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open cache file for writing: " + path);
    auto put_u64 = [&](std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        os.write(b, 8);
    };
    auto put_str = [&](const std::string& s) {
        put_u64(s.size());
        os.write(s.data(), static_cast<std::streamsize>(s.size()));
    };
    os.write(kCacheMagic, 8);
    put_u64(cache_key(samples));
    put_str(samples.provenance().model_id);
    put_str(samples.provenance().start);
    put_u64(samples.provenance().root_seed);
    put_u64(samples.checkpoints().size());
    for (auto n : samples.checkpoints()) put_u64(static_cast<std::uint64_t>(n));
    put_u64(samples.replicas());
    static_assert(sizeof(double) == 8);
    os.write(reinterpret_cast<const char*>(samples.raw().data()),
             static_cast<std::streamsize>(samples.raw().size() * sizeof(double)));
    if (!os) throw std::runtime_error("failed writing cache file: " + path);
}

/// Returns nullopt when the file is missing or carries a different magic.
inline std::optional<empirics::MaxSampleMatrix> read_sample_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kCacheMagic, 8) != 0) return std::nullopt;
    auto get_u64 = [&]() {
        char b[8];
        is.read(b, 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
        return v;
    };
    auto get_str = [&]() {
        const auto len = get_u64();
        std::string s(len, '\0');
        is.read(s.data(), static_cast<std::streamsize>(len));
        return s;
    };
    const std::uint64_t key = get_u64();
    empirics::Provenance prov;
    prov.model_id = get_str();
    prov.start = get_str();
    prov.root_seed = get_u64();
    const std::uint64_t n_checkpoints = get_u64();
    std::vector<std::int64_t> cps(n_checkpoints);
    for (auto& n : cps) n = static_cast<std::int64_t>(get_u64());
    const std::uint64_t replicas = get_u64();
    std::vector<double> values(replicas * n_checkpoints);
    is.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!is) return std::nullopt;
    empirics::MaxSampleMatrix m(std::move(cps), replicas, std::move(values), std::move(prov));
    if (cache_key(m) != key) return std::nullopt;
    return m;
}

}  // namespace phantomlab::io

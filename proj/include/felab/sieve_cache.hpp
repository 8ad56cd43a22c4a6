#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "felab/arith.hpp"

// Smallest-prime-factor tables persisted between runs.
// Layout: 8-byte magic, u64 limit, u64 FNV-1a of the table bytes, then
// (limit + 1) little-endian u32 entries.
namespace felab::sieve_cache {

inline constexpr char magic[8] = {'F', 'E', 'L', 'S', 'I', 'E', 'V', '1'};

inline std::uint64_t fnv1a(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

enum class load_status { hit, missing, too_small, corrupt };

inline const char* status_name(load_status s) {
    switch (s) {
    case load_status::hit: return "hit";
    case load_status::missing: return "missing";
    case load_status::too_small: return "too-small";
    case load_status::corrupt: return "corrupt";
    }
    return "?";
}

struct loaded {
    load_status status;
    std::shared_ptr<const arith::sieve> table; // set on hit
};

inline loaded load(const std::string& path, natural limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {load_status::missing, nullptr};
    char head[8];
    std::uint64_t stored_limit = 0, sum = 0;
    if (!in.read(head, 8) || std::memcmp(head, magic, 8) != 0) return {load_status::corrupt, nullptr};
    if (!in.read(reinterpret_cast<char*>(&stored_limit), 8) || !in.read(reinterpret_cast<char*>(&sum), 8))
        return {load_status::corrupt, nullptr};
    if (stored_limit > arith::default_sieve_cap) return {load_status::corrupt, nullptr};
    if (stored_limit < limit) return {load_status::too_small, nullptr};
    std::vector<std::uint32_t> table(stored_limit + 1);
    std::size_t bytes = table.size() * sizeof(std::uint32_t);
    if (!in.read(reinterpret_cast<char*>(table.data()), static_cast<std::streamsize>(bytes)))
        return {load_status::corrupt, nullptr};
    if (in.peek() != std::ifstream::traits_type::eof()) return {load_status::corrupt, nullptr};
    if (fnv1a(table.data(), bytes) != sum) return {load_status::corrupt, nullptr};
    // Spot-check the table itself, not just the bytes.
    for (natural n = 2; n <= std::min<natural>(stored_limit, 1000); ++n)
        if (table[n] < 2 || n % table[n] != 0) return {load_status::corrupt, nullptr};
    return {load_status::hit, std::make_shared<const arith::sieve>(arith::sieve::from_table(std::move(table)))};
}

inline bool store(const std::string& path, const arith::sieve& s) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return false;
        const auto& t = s.table();
        std::uint64_t limit = s.limit();
        std::size_t bytes = t.size() * sizeof(std::uint32_t);
        std::uint64_t sum = fnv1a(t.data(), bytes);
        out.write(magic, 8);
        out.write(reinterpret_cast<const char*>(&limit), 8);
        out.write(reinterpret_cast<const char*>(&sum), 8);
        out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(bytes));
        if (!out) return false;
    }
    return std::rename(tmp.c_str(), path.c_str()) == 0;
}

// Loads a covering table or builds one and writes it back.
inline loaded obtain(const std::string& path, natural limit) {
    loaded l = load(path, limit);
    if (l.status == load_status::hit) return l;
    auto built = std::make_shared<const arith::sieve>(limit);
    store(path, *built);
    return {l.status, built};
}

} // namespace felab::sieve_cache

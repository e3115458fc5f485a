#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace laesim {

// Flat ordered key-value map. The on-disk format is one `key = value` per
// line with '#' comments; ordering is canonical (sorted) so dumps diff and
// hash stably.
using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text);
KvMap load_kv_file(const std::string& path);
std::string serialize_kv(const KvMap& kv);
void save_kv_file(const KvMap& kv, const std::string& path);

// Applies `key=value` override strings on top of `base`.
void apply_overrides(KvMap& base, const std::vector<std::string>& overrides);

// FNV-1a 64-bit over the canonical serialization.
std::uint64_t kv_hash(const KvMap& kv);
std::string kv_hash_hex(const KvMap& kv);

// Typed getters with defaults. Throw std::invalid_argument on malformed
// values, listing the offending key.
double kv_get_double(const KvMap& kv, const std::string& key, double fallback);
std::int64_t kv_get_int(const KvMap& kv, const std::string& key, std::int64_t fallback);
std::string kv_get_string(const KvMap& kv, const std::string& key, const std::string& fallback);
std::vector<double> kv_get_double_list(const KvMap& kv, const std::string& key,
                                       const std::vector<double>& fallback);
std::vector<std::int64_t> kv_get_int_list(const KvMap& kv, const std::string& key,
                                          const std::vector<std::int64_t>& fallback);

}  // namespace laesim

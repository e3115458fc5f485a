#include "laesim/kvconfig.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace laesim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad numeric value '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw std::invalid_argument("config key '" + key + "': bad integer value '" + value + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

KvMap parse_kv_text(const std::string& text) {
  KvMap kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KvMap load_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str());
}

std::string serialize_kv(const KvMap& kv) {
  std::string out;
  for (const auto& [key, value] : kv) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

void save_kv_file(const KvMap& kv, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << serialize_kv(kv);
}

void apply_overrides(KvMap& base, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override '" + item + "': expected key=value");
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    const auto kb = key.find_first_not_of(" \t");
    const auto ke = key.find_last_not_of(" \t");
    if (kb == std::string::npos) throw std::invalid_argument("override with empty key");
    base[key.substr(kb, ke - kb + 1)] = value;
  }
}

std::uint64_t kv_hash(const KvMap& kv) {
  const std::string text = serialize_kv(kv);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string kv_hash_hex(const KvMap& kv) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(kv_hash(kv)));
  return buf;
}

double kv_get_double(const KvMap& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_double(key, it->second);
}

std::int64_t kv_get_int(const KvMap& kv, const std::string& key, std::int64_t fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_int(key, it->second);
}

std::string kv_get_string(const KvMap& kv, const std::string& key, const std::string& fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

std::vector<double> kv_get_double_list(const KvMap& kv, const std::string& key,
                                       const std::vector<double>& fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::vector<double> out;
  for (const std::string& item : split_list(it->second)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::int64_t> kv_get_int_list(const KvMap& kv, const std::string& key,
                                          const std::vector<std::int64_t>& fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::vector<std::int64_t> out;
  for (const std::string& item : split_list(it->second)) out.push_back(parse_int(key, item));
  return out;
}

}  // namespace laesim

#pragma once

// Versioned JSON persistence for tau-polynomials and pair-constant tables.
//
//   {"schema":1,"L":4,"M":5,"kind":"pair_constants",
//    "values":{"0":"<decimal>", ...},"digest":"<sha256 of the rest>"}
//
// The digest covers the canonical dump of every field except itself, so a
// truncated or hand-edited file is detected on load.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "spinekit/error.hpp"
#include "spinekit/tau.hpp"

namespace spinekit {

inline constexpr int kCacheSchema = 1;

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

inline std::string content_digest(const nlohmann::json& doc) {
  nlohmann::json body = doc;
  body.erase("digest");
  return sha256_hex(body.dump());
}

inline nlohmann::json sealed(nlohmann::json doc) {
  doc["digest"] = content_digest(doc);
  return doc;
}

inline std::string double_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json cache_header(int L, int M, const std::string& kind) {
  return {{"schema", kCacheSchema}, {"L", L}, {"M", M}, {"kind", kind}};
}

inline nlohmann::json to_json(const TauPolynomial& tau) {
  auto doc = cache_header(tau.context().L(), tau.context().N(), "tau");
  doc["values"] = nlohmann::json::object();
  for (const auto& [js, c] : tau.terms()) doc["values"][multiset_key(js)] = c.get_str();
  return sealed(std::move(doc));
}

inline nlohmann::json to_json(const PairConstantTable<Rational>& t) {
  auto doc = cache_header(t.L, t.M, "pair_constants");
  doc["values"] = nlohmann::json::object();
  for (const auto& [p, v] : t.values) doc["values"][std::to_string(p)] = v.get_str();
  return sealed(std::move(doc));
}

inline nlohmann::json to_json(const PairConstantTable<double>& t) {
  auto doc = cache_header(t.L, t.M, "pair_constants_float");
  doc["values"] = nlohmann::json::object();
  for (const auto& [p, v] : t.values) doc["values"][std::to_string(p)] = double_text(v);
  return sealed(std::move(doc));
}

// Schema, kind and digest check; throws CacheError on any mismatch.
inline void verify_cache(const nlohmann::json& doc, const std::string& kind) {
  if (!doc.is_object()) throw CacheError("cache is not a JSON object");
  if (doc.value("schema", -1) != kCacheSchema) throw CacheError("unsupported cache schema");
  if (doc.value("kind", std::string()) != kind) throw CacheError("cache kind is not '" + kind + "'");
  if (!doc.contains("digest") || !doc["digest"].is_string()) throw CacheError("cache has no digest");
  if (doc["digest"].get<std::string>() != content_digest(doc)) {
    throw CacheError("cache checksum mismatch (file corrupted or edited)");
  }
  if (!doc.contains("values") || !doc["values"].is_object()) throw CacheError("cache has no values");
}

inline TauPolynomial tau_from_json(const nlohmann::json& doc) {
  verify_cache(doc, "tau");
  const SpineContext ctx(doc.at("L").get<int>(), doc.at("M").get<int>());
  std::map<MomentumMultiset, Rational> terms;
  for (const auto& [k, v] : doc["values"].items()) terms.emplace(parse_multiset_key(k), parse_rational(v.get<std::string>()));
  return TauPolynomial(ctx, std::move(terms));
}

inline PairConstantTable<Rational> pair_table_from_json(const nlohmann::json& doc) {
  verify_cache(doc, "pair_constants");
  PairConstantTable<Rational> t{doc.at("L").get<int>(), doc.at("M").get<int>(), {}};
  for (const auto& [k, v] : doc["values"].items()) t.values.emplace(std::stol(k), parse_rational(v.get<std::string>()));
  return t;
}

inline PairConstantTable<double> pair_table_float_from_json(const nlohmann::json& doc) {
  verify_cache(doc, "pair_constants_float");
  PairConstantTable<double> t{doc.at("L").get<int>(), doc.at("M").get<int>(), {}};
  for (const auto& [k, v] : doc["values"].items()) t.values.emplace(std::stol(k), std::stod(v.get<std::string>()));
  return t;
}

inline std::filesystem::path cache_path(const std::filesystem::path& dir, int L, int M, const std::string& kind) {
  return dir / (kind + "_L" + std::to_string(L) + "_M" + std::to_string(M) + ".json");
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << doc.dump(1) << "\n";
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception&) {
    throw CacheError("cache " + path.string() + " is not valid JSON");
  }
}

}  // namespace spinekit

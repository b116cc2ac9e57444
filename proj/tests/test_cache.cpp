#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "spinekit/cache.hpp"

using namespace spinekit;

namespace {

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / "spinekit_test_cache";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cache, TauRoundTrip) {
  const auto tau = tau_polynomial(build_spine(SpineContext(2, 3)));
  const auto doc = to_json(tau);
  EXPECT_EQ(doc["schema"], kCacheSchema);
  EXPECT_EQ(doc["kind"], "tau");
  const auto back = tau_from_json(doc);
  EXPECT_EQ(back.terms(), tau.terms());
  EXPECT_EQ(back.context().N(), 3);
}

TEST(Cache, PairTablesRoundTrip) {
  const auto spine = build_spine(SpineContext(2, 3));
  const auto exact = pair_constants_circular<Rational>(spine);
  EXPECT_EQ(pair_table_from_json(to_json(exact)).values, exact.values);
  const auto approx = pair_constants_circular<double>(spine);
  EXPECT_EQ(pair_table_float_from_json(to_json(approx)).values, approx.values);
}

TEST(Cache, DetectsEditsAndWrongKinds) {
  const auto tau = tau_polynomial(build_spine(SpineContext(2, 2)));
  auto doc = to_json(tau);
  EXPECT_THROW(pair_table_from_json(doc), CacheError);
  auto edited = doc;
  edited["values"]["0,0"] = "4";
  EXPECT_THROW(tau_from_json(edited), CacheError);
  auto old = doc;
  old["schema"] = 0;
  EXPECT_THROW(tau_from_json(sealed(old)), CacheError);
  auto unsealed = doc;
  unsealed.erase("digest");
  EXPECT_THROW(tau_from_json(unsealed), CacheError);
}

TEST(Cache, FileRoundTripAndBadJson) {
  const auto dir = scratch_dir();
  const auto tau = tau_polynomial(build_spine(SpineContext(2, 2)));
  const auto path = cache_path(dir, 2, 2, "tau");
  EXPECT_EQ(path.filename(), "tau_L2_M2.json");
  write_json(path, to_json(tau));
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  EXPECT_EQ(tau_from_json(read_json(path)).terms(), tau.terms());
  {
    std::ofstream out(path);
    out << "{\"schema\": 1, \"values\": ";
  }
  EXPECT_THROW(read_json(path), CacheError);
  std::filesystem::remove_all(dir);
}

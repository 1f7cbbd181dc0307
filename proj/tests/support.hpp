#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "carbon_quota/country.hpp"
#include "carbon_quota/dataset.hpp"

namespace testing {

inline const std::filesystem::path kData = CQUOTA_DATA_DIR;
inline const std::filesystem::path kFixtures = CQUOTA_FIXTURES_DIR;

inline const cquota::Dataset& shipped() {
  static const cquota::Dataset d = cquota::load_dataset(cquota::DatasetPaths::in_directory(kData));
  return d;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cquota-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write(const std::filesystem::path& dir, const std::string& name,
                                   const std::string& text) {
  std::ofstream(dir / name, std::ios::binary) << text;
  return dir / name;
}

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Random positive values for the 27 Member States.
inline cquota::CountryValues random_values(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  cquota::CountryValues out;
  for (const auto& c : cquota::member_states()) out.push_back({c.code, u(rng)});
  return out;
}

}  // namespace testing

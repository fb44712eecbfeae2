#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace invbal::cli {

/// Flags shared by every subcommand.
struct Common {
  bool deterministic = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::filesystem::path out;
};

struct SimulateArgs {
  std::filesystem::path config;
  std::filesystem::path instance;
  std::vector<std::string> policies;
  std::string psi = "exponential";
};

struct ReproduceArgs {
  std::string table;
  std::optional<std::int64_t> n0;
  std::optional<std::int64_t> c;
  std::vector<std::int64_t> cs;
  std::optional<int> gamma;
};

struct IapArgs {
  std::filesystem::path input;
  bool json = false;
};

struct BoundArgs {
  std::string psi = "exponential";
  std::vector<std::int64_t> gammas;
  std::vector<std::int64_t> c0s;
  bool sqrt_gamma = false;
};

struct RunArgs {
  std::filesystem::path config;
  std::filesystem::path instance;
  std::string psi = "exponential";
  std::int64_t gamma = 1;
};

int simulate(const Common& common, const SimulateArgs& args);
int reproduce(const Common& common, const ReproduceArgs& args);
int iap_solve(const Common& common, const IapArgs& args);
int iap_check(const Common& common, const IapArgs& args);
int bound(const Common& common, const BoundArgs& args);
int lp_benchmark(const Common& common, const RunArgs& args);
int certify(const Common& common, const RunArgs& args);

}  // namespace invbal::cli

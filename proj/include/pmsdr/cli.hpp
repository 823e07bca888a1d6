#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pmsdr/losses.hpp"

namespace pmsdr::cli {

/// Everything a subcommand can be configured with. Defaults follow the
/// linear fitting interface: svm loss, h = 10, lambda = 1, eta = 0.1,
/// eps = 1e-5, max_iter = 100, margin type "m".
struct RunConfig {
  std::string command;
  std::string input;            // CSV path, "-" for standard input
  std::string response = "y";   // column name or 1-based index
  std::string loss = "svm";     // built-in family name or "custom:<expression in u>"
  std::size_t h = 10;
  double lambda = 1.0;
  double eta = 0.1;
  double eps = 1e-5;
  std::size_t max_iter = 100;
  std::string mtype = "m";
  bool warm_start = true;
  std::size_t b = 0;            // 0 selects floor(n/3)
  std::optional<double> gamma;
  double rho = 0.01;
  std::size_t p_max = 0;
  std::size_t d = 0;            // 0 selects 1 for linear fits, 2 for kernel fits
  std::string fit;              // fit.json for bic/project
  std::string evalues;          // comma-separated, for bic without a fit file
  std::size_t n = 0;
  std::string batches;          // directory of batch CSVs for stream
  std::string resume;           // stream state snapshot to continue from
  std::string model = "12";
  std::uint64_t seed = 1;
  std::string out;              // output prefix (generate: output file)
};

/// Resolves a --loss/--mtype pair into a loss specification. Throws
/// InputError naming the valid choices for unknown names.
LossSpec resolve_loss(const std::string& name, const std::string& mtype);

/// Runs one command line (argv[0] included). Exit codes: 0 success, 2 input
/// or parse errors, 3 numerical failures.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace pmsdr::cli

// Experiment runner: partition generators, alpha sweeps and the CSV / PGM
// outputs written by the alfent command line tool.
#pragma once

#include "alf/entropy.hpp"
#include "alf/lyapunov.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace alf {

struct ExperimentConfig {
  std::vector<double> alphas;
  int grid = 0;
  std::string partition = "random:3";  // random:D[:seed] | cluster:D[:cx,cy] | file:<path> | list:a,b;c,d
  std::uint64_t seed = 0;
  int steps = 5;
  Engine engine = Engine::automatic;
  std::filesystem::path output_dir = ".";
  int jobs = 1;

  /// Throws std::invalid_argument on the first failed precondition.
  void validate() const;
};

/// Flat `key = value` settings; later calls to apply_setting override earlier ones.
using Settings = std::map<std::string, std::string>;

Settings read_settings_file(const std::filesystem::path& path);

/// Recognized keys: alpha, alpha-range, n-grid, partition, seed, steps, engine, out, jobs.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// a:b:step, inclusive of b up to rounding; values are rounded to 12 decimals.
std::vector<double> parse_alpha_range(const std::string& range);

Partition gen_partition(const std::string& spec, int grid, std::uint64_t seed);

/// The nearest-neighbour clusters used for the Lyapunov estimates, translated
/// to `center`: D=5 center + 4 axial neighbours; D=4 2x2 block; D=3 center,
/// up, left; D=2 center, left. Wraps mod N.
Partition cluster_partition(int size, const LatticePoint& center, int grid);

Partition random_partition(int size, int grid, std::uint64_t seed);

Partition read_partition_file(const std::filesystem::path& path, int grid);

// ---------------------------------------------------------------------------
// Serialization

/// Shortest round-trip representation (at most 17 significant digits).
std::string format_number(double value);

std::string entropy_csv_name(double alpha, int grid, std::size_t partition_size);
std::string density_pgm_name(double alpha, int grid, int n);
std::string density_csv_name(double alpha, int grid, int n);
std::string lyapunov_csv_name(int grid, std::size_t partition_size);

void write_entropy_csv(const std::filesystem::path& path, const EntropySeries& series);
EntropySeries read_entropy_csv(const std::filesystem::path& path);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// gray = round(255 nu / nu_max), nu = 0 -> 0; pixel (row, col) = nu(l1 = col, l2 = N - 1 - row).
GrayImage render_density(const FrequencyField& nu);

void write_pgm(const std::filesystem::path& path, const GrayImage& image, const std::string& comment);
GrayImage read_pgm(const std::filesystem::path& path);

/// Lossless sidecar: `l1,l2,nu` for every lattice point.
void write_frequency_csv(const std::filesystem::path& path, const FrequencyField& nu);
FrequencyField read_frequency_csv(const std::filesystem::path& path, int grid);

// ---------------------------------------------------------------------------
// Runs

struct SweepItem {
  double alpha = 0;
  std::optional<EntropySeries> series;
  std::string error;
  std::vector<std::filesystem::path> files;
};

/// One CSV per alpha; per-alpha failures are recorded in manifest.txt and do
/// not stop the sweep.
std::vector<SweepItem> run_entropy_sweep(const ExperimentConfig& config);

/// One PGM (and raw-nu CSV sidecar) per n for every alpha. Integer alpha only.
std::vector<SweepItem> run_density_maps(const ExperimentConfig& config);

struct LyapunovRow {
  double alpha = 0;
  int m = 0;
  double l_m = 0;
  std::optional<double> theoretical;
};

/// l^m for m = 2..steps for every alpha; writes lyapunov_N<N>_D<D>.csv.
std::vector<LyapunovRow> run_lyapunov_fit(const ExperimentConfig& config);

/// alpha=<v> regime=<tag> lambda=<lambda+> log_lambda=<ln lambda+ or 0> [tau_B@N=<v>] [period=<k>]
std::string classify_line(double alpha, std::optional<int> grid);

}  // namespace alf

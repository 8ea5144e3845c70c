#include "alf/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace alf {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid " + what + ": '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid " + what + ": '" + s + "'");
  }
}

LatticePoint parse_pair(const std::string& s, char sep) {
  const auto parts = split(s, sep);
  if (parts.size() != 2) throw std::invalid_argument("expected an integer pair, got '" + s + "'");
  return {parse_int(parts[0], "coordinate"), parse_int(parts[1], "coordinate")};
}

// Runs body(i) for i in [0, count) on up to `jobs` threads.
template <typename Body>
void parallel_for(std::size_t count, int jobs, Body body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
}

void write_manifest(const ExperimentConfig& config, const std::string& command, const std::vector<SweepItem>& items) {
  std::ofstream out(config.output_dir / "manifest.txt");
  out << "# alfent " << command << " n-grid=" << config.grid << " partition=" << config.partition
      << " seed=" << config.seed << " steps=" << config.steps << " engine=" << to_string(config.engine) << "\n";
  for (const auto& item : items) {
    if (item.error.empty()) {
      for (const auto& f : item.files) out << "ok alpha=" << format_number(item.alpha) << " " << f.filename().string() << "\n";
    } else {
      out << "error alpha=" << format_number(item.alpha) << " " << item.error << "\n";
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  if (alphas.empty()) throw std::invalid_argument("no alpha values given (use --alpha or --alpha-range)");
  for (const double a : alphas)
    if (!std::isfinite(a)) throw std::invalid_argument("alpha must be finite");
  if (grid < 2) throw std::invalid_argument("--n-grid N must be >= 2");
  if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
  if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
  if (engine == Engine::frequency)
    for (const double a : alphas)
      if (a != std::floor(a))
        throw std::invalid_argument("engine=frequency requires integer alpha, got " + format_number(a));
  // resolves the partition spec (and checks D <= N^2) before any computation
  gen_partition(partition, grid, seed);
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  Settings settings;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(fmt::format("{}:{}: expected 'key = value'", path.string(), number));
    settings[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return settings;
}

std::vector<double> parse_alpha_range(const std::string& range) {
  const auto parts = split(range, ':');
  if (parts.size() != 3) throw std::invalid_argument("alpha range must be a:b:step, got '" + range + "'");
  const double a = parse_double(parts[0], "alpha range start");
  const double b = parse_double(parts[1], "alpha range end");
  const double step = parse_double(parts[2], "alpha range step");
  if (step <= 0 || b < a) throw std::invalid_argument("alpha range needs a <= b and step > 0");
  const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) out.push_back(std::round((a + static_cast<double>(k) * step) * 1e12) / 1e12);
  return out;
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  if (key == "alpha") {
    config.alphas.clear();
    for (const auto& v : split(value, ',')) config.alphas.push_back(parse_double(v, "alpha"));
  } else if (key == "alpha-range") {
    config.alphas = parse_alpha_range(value);
  } else if (key == "n-grid") {
    config.grid = static_cast<int>(parse_int(value, "n-grid"));
  } else if (key == "partition") {
    config.partition = value;
  } else if (key == "seed") {
    config.seed = static_cast<std::uint64_t>(parse_int(value, "seed"));
  } else if (key == "steps") {
    config.steps = static_cast<int>(parse_int(value, "steps"));
  } else if (key == "engine") {
    config.engine = parse_engine(value);
  } else if (key == "out") {
    config.output_dir = value;
  } else if (key == "jobs") {
    config.jobs = static_cast<int>(parse_int(value, "jobs"));
  } else {
    throw std::invalid_argument("unknown setting '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Partitions

Partition cluster_partition(int size, const LatticePoint& center, int grid) {
  std::vector<LatticePoint> offsets;
  switch (size) {
    case 5:
      offsets = {{0, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}};
      break;
    case 4:
      offsets = {{0, 0}, {-1, 0}, {0, 1}, {-1, 1}};
      break;
    case 3:
      offsets = {{0, 0}, {0, 1}, {-1, 0}};
      break;
    case 2:
      offsets = {{0, 0}, {-1, 0}};
      break;
    default:
      throw std::invalid_argument("cluster partitions exist for D in {2,3,4,5}, got " + std::to_string(size));
  }
  if (static_cast<long long>(size) > static_cast<long long>(grid) * grid)
    throw std::invalid_argument("cluster larger than the lattice");
  std::vector<LatticePoint> points;
  for (const auto& o : offsets) points.push_back(reduce({center.l1 + o.l1, center.l2 + o.l2}, grid));
  return Partition(std::move(points), grid);
}

Partition random_partition(int size, int grid, std::uint64_t seed) {
  const long long cells = static_cast<long long>(grid) * grid;
  if (size < 1 || size > cells) throw std::invalid_argument("random partition needs 1 <= D <= N^2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> pick(0, cells - 1);
  std::set<long long> used;
  std::vector<LatticePoint> points;
  while (static_cast<int>(points.size()) < size) {
    const long long idx = pick(rng);
    if (used.insert(idx).second) points.push_back(lattice_point(static_cast<std::size_t>(idx), grid));
  }
  return Partition(std::move(points), grid);
}

Partition read_partition_file(const std::filesystem::path& path, int grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partition file " + path.string());
  std::vector<LatticePoint> points;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    LatticePoint p;
    std::string extra;
    if (!(fields >> p.l1 >> p.l2) || (fields >> extra))
      throw std::invalid_argument("partition file lines must be 'r1 r2', got '" + line + "'");
    points.push_back(p);
  }
  return Partition(std::move(points), grid);
}

Partition gen_partition(const std::string& spec, int grid, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (kind == "file") return read_partition_file(rest, grid);
  if (kind == "list") {
    std::vector<LatticePoint> points;
    for (const auto& item : split(rest, ';')) points.push_back(parse_pair(item, ','));
    return Partition(std::move(points), grid);
  }
  const auto fields = split(rest, ':');
  if (fields.empty() || fields[0].empty()) throw std::invalid_argument("partition spec '" + spec + "' lacks D");
  const auto size = parse_int(fields[0], "partition size D");
  if (size < 1 || size > static_cast<long long>(grid) * grid)
    throw std::invalid_argument("partition size D must satisfy 1 <= D <= N^2");
  if (kind == "random") {
    if (fields.size() > 2) throw std::invalid_argument("expected random:D[:seed], got '" + spec + "'");
    const auto s = fields.size() == 2 ? static_cast<std::uint64_t>(parse_int(fields[1], "seed")) : seed;
    return random_partition(static_cast<int>(size), grid, s);
  }
  if (kind == "cluster") {
    if (fields.size() > 2) throw std::invalid_argument("expected cluster:D[:cx,cy], got '" + spec + "'");
    const LatticePoint center = fields.size() == 2 ? parse_pair(fields[1], ',') : LatticePoint{grid / 2, grid / 2};
    return cluster_partition(static_cast<int>(size), center, grid);
  }
  throw std::invalid_argument("unknown partition kind '" + kind + "' (random, cluster, file, list)");
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_number(double value) {
  if (value == 0) return "0";  // no "-0"
  return fmt::format("{}", value);
}

std::string entropy_csv_name(double alpha, int grid, std::size_t partition_size) {
  return fmt::format("entropy_alpha{}_N{}_D{}.csv", format_number(alpha), grid, partition_size);
}

std::string density_pgm_name(double alpha, int grid, int n) {
  return fmt::format("nu_alpha{}_N{}_n{}.pgm", format_number(alpha), grid, n);
}

std::string density_csv_name(double alpha, int grid, int n) {
  return fmt::format("nu_alpha{}_N{}_n{}.csv", format_number(alpha), grid, n);
}

std::string lyapunov_csv_name(int grid, std::size_t partition_size) {
  return fmt::format("lyapunov_N{}_D{}.csv", grid, partition_size);
}

void write_entropy_csv(const std::filesystem::path& path, const EntropySeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "n,H_nats,h_nats\n";
  for (const auto& row : series) out << row.n << ',' << format_number(row.H) << ',' << format_number(row.h) << '\n';
}

EntropySeries read_entropy_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "n,H_nats,h_nats")
    throw std::invalid_argument(path.string() + ": unexpected header");
  EntropySeries series;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) throw std::invalid_argument(path.string() + ": malformed row '" + line + "'");
    series.push_back({static_cast<int>(parse_int(f[0], "n")), parse_double(f[1], "H"), parse_double(f[2], "h")});
  }
  return series;
}

GrayImage render_density(const FrequencyField& nu) {
  GrayImage img;
  img.width = img.height = nu.grid;
  img.pixels.assign(static_cast<std::size_t>(nu.grid) * nu.grid, 0);
  const double peak = nu.nu.empty() ? 0.0 : *std::max_element(nu.nu.begin(), nu.nu.end());
  if (peak <= 0) return img;
  for (std::int64_t l1 = 0; l1 < nu.grid; ++l1)
    for (std::int64_t l2 = 0; l2 < nu.grid; ++l2) {
      const double v = nu.nu[lattice_index({l1, l2}, nu.grid)];
      const auto row = static_cast<std::size_t>(nu.grid - 1 - l2);
      img.pixels[row * static_cast<std::size_t>(nu.grid) + static_cast<std::size_t>(l1)] =
          static_cast<std::uint8_t>(std::lround(255.0 * v / peak));
    }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image, const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n# " << comment << "\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto token = [&in] {
    std::string t;
    while (in >> t) {
      if (t[0] != '#') return t;
      std::string rest;
      std::getline(in, rest);
    }
    throw std::invalid_argument("truncated PGM header");
  };
  if (token() != "P5") throw std::invalid_argument(path.string() + ": not a binary PGM");
  GrayImage img;
  img.width = std::stoi(token());
  img.height = std::stoi(token());
  if (std::stoi(token()) != 255) throw std::invalid_argument(path.string() + ": maxval must be 255");
  in.get();  // single whitespace before raster
  img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw std::invalid_argument(path.string() + ": truncated raster");
  return img;
}

void write_frequency_csv(const std::filesystem::path& path, const FrequencyField& nu) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "l1,l2,nu\n";
  for (std::size_t i = 0; i < nu.nu.size(); ++i) {
    const auto l = lattice_point(i, nu.grid);
    out << l.l1 << ',' << l.l2 << ',' << format_number(nu.nu[i]) << '\n';
  }
}

FrequencyField read_frequency_csv(const std::filesystem::path& path, int grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (trim(line) != "l1,l2,nu") throw std::invalid_argument(path.string() + ": unexpected header");
  FrequencyField nu;
  nu.grid = grid;
  nu.nu.assign(static_cast<std::size_t>(grid) * grid, 0.0);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) throw std::invalid_argument(path.string() + ": malformed row '" + line + "'");
    const LatticePoint l{parse_int(f[0], "l1"), parse_int(f[1], "l2")};
    nu.nu[lattice_index(reduce(l, grid), grid)] = parse_double(f[2], "nu");
  }
  return nu;
}

// ---------------------------------------------------------------------------
// Runs

std::vector<SweepItem> run_entropy_sweep(const ExperimentConfig& config) {
  config.validate();
  const Partition part = gen_partition(config.partition, config.grid, config.seed);
  std::filesystem::create_directories(config.output_dir);
  std::vector<SweepItem> items(config.alphas.size());
  parallel_for(items.size(), config.jobs, [&](std::size_t i) {
    auto& item = items[i];
    item.alpha = config.alphas[i];
    try {
      item.series = entropy_series(part, MapParams(item.alpha, config.grid), config.steps, config.engine);
      const auto path = config.output_dir / entropy_csv_name(item.alpha, config.grid, part.size());
      write_entropy_csv(path, *item.series);
      item.files.push_back(path);
    } catch (const std::exception& e) {
      item.series.reset();
      item.error = e.what();
    }
  });
  write_manifest(config, "entropy", items);
  return items;
}

std::vector<SweepItem> run_density_maps(const ExperimentConfig& config) {
  config.validate();
  for (const double a : config.alphas)
    if (a != std::floor(a))
      throw std::invalid_argument("density maps need integer alpha (frequency engine), got " + format_number(a));
  const Partition part = gen_partition(config.partition, config.grid, config.seed);
  std::filesystem::create_directories(config.output_dir);
  std::vector<SweepItem> items(config.alphas.size());
  parallel_for(items.size(), config.jobs, [&](std::size_t i) {
    auto& item = items[i];
    item.alpha = config.alphas[i];
    try {
      FrequencyRecursion rec(part, MapParams(item.alpha, config.grid));
      EntropySeries series;
      for (int n = 1; n <= config.steps; ++n) {
        const auto& nu = rec.step();
        const double peak = *std::max_element(nu.nu.begin(), nu.nu.end());
        const std::string comment =
            fmt::format("alpha={} N={} n={} D={} partition={} seed={} normalization=per-frame nu_max={}",
                        format_number(item.alpha), config.grid, n, part.size(), config.partition, config.seed,
                        format_number(peak));
        const auto pgm = config.output_dir / density_pgm_name(item.alpha, config.grid, n);
        const auto csv = config.output_dir / density_csv_name(item.alpha, config.grid, n);
        write_pgm(pgm, render_density(nu), comment);
        write_frequency_csv(csv, nu);
        item.files.push_back(pgm);
        item.files.push_back(csv);
        const double h = shannon_entropy(nu);
        series.push_back({n, h, h / n});
      }
      item.series = std::move(series);
    } catch (const std::exception& e) {
      item.series.reset();
      item.error = e.what();
    }
  });
  write_manifest(config, "density", items);
  return items;
}

std::vector<LyapunovRow> run_lyapunov_fit(const ExperimentConfig& config) {
  config.validate();
  if (config.steps < 2) throw std::invalid_argument("lyapunov fit needs --steps >= 2");
  const Partition part = gen_partition(config.partition, config.grid, config.seed);
  std::filesystem::create_directories(config.output_dir);

  std::vector<SweepItem> items(config.alphas.size());
  std::vector<std::vector<LyapunovRow>> per_alpha(config.alphas.size());
  parallel_for(items.size(), config.jobs, [&](std::size_t i) {
    auto& item = items[i];
    item.alpha = config.alphas[i];
    try {
      item.series = entropy_series(part, MapParams(item.alpha, config.grid), config.steps, config.engine);
      const auto compact = compactify(*item.series);
      std::optional<double> theory;
      if (classify_regime(item.alpha).tag == RegimeTag::hyperbolic) theory = theoretical_lyapunov(item.alpha);
      for (int m = 2; m <= config.steps; ++m)
        per_alpha[i].push_back({item.alpha, m, lagrange_extrapolate(compact, m).value, theory});
    } catch (const std::exception& e) {
      item.series.reset();
      item.error = e.what();
      per_alpha[i].clear();
    }
  });

  const auto path = config.output_dir / lyapunov_csv_name(config.grid, part.size());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "alpha,m,l_m,theoretical\n";
  std::vector<LyapunovRow> rows;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& row : per_alpha[i]) {
      out << format_number(row.alpha) << ',' << row.m << ',' << format_number(row.l_m) << ','
          << (row.theoretical ? format_number(*row.theoretical) : std::string()) << '\n';
      rows.push_back(row);
    }
    if (items[i].error.empty()) items[i].files.push_back(path);
  }
  write_manifest(config, "lyapunov", items);
  return rows;
}

std::string classify_line(double alpha, std::optional<int> grid) {
  const Regime regime = classify_regime(alpha);
  std::string line = fmt::format("alpha={} regime={}", format_number(alpha), to_string(regime.tag));
  if (regime.tag == RegimeTag::elliptic) {
    const auto& l = regime.lambda_plus;
    line += fmt::format(" lambda={}{}{}i log_lambda=0", format_number(l.real()), l.imag() < 0 ? "" : "+",
                        format_number(l.imag()));
    if (alpha == std::floor(alpha)) {
      const int period = elliptic_period(static_cast<std::int64_t>(alpha));
      if (period > 0) line += fmt::format(" period={}", period);
    }
    return line;
  }
  if (regime.tag == RegimeTag::parabolic) return line + fmt::format(" lambda={} log_lambda=0", format_number(regime.lambda_plus.real()));
  const double log_lambda = theoretical_lyapunov(alpha);
  line += fmt::format(" lambda={} log_lambda={}", format_number(std::exp(log_lambda)), format_number(log_lambda));
  if (grid) line += fmt::format(" tau_B@N={}", format_number(breaking_time(alpha, *grid)));
  return line;
}

}  // namespace alf

#include <CLI11.hpp>

#include <pthread.h>

#include <csignal>
#include <iostream>

#include "skelforge/batch.hpp"
#include "skelforge/fixtures.hpp"
#include "skelforge/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"skelforge: stroke to skeleton engine"};
  app.require_subcommand(0, 1);

  skelforge::BatchOptions batch;
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::string csv;
  std::uint64_t seed = 1;
  auto& cfg = batch.config;
  app.add_option("--in", inputs, "Polygon files, scene documents or directories of them");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--svg", batch.svg, "Also write an SVG per input");
  app.add_option("--csv", csv, "Append timing rows to this CSV");
  app.add_option("--step", cfg.stroke.step, "Stroke resampling step")->check(CLI::PositiveNumber);
  app.add_option("--eps-poly", cfg.stroke.eps_poly, "Polygon DP tolerance")->check(CLI::PositiveNumber);
  app.add_option("--alpha-s", cfg.bdp.alpha_s, "BoundedDP shape weight")->check(CLI::NonNegativeNumber);
  app.add_option("--eps-s", cfg.refine.eps_s, "Branch simplification threshold")->check(CLI::NonNegativeNumber);
  app.add_option("--eps-m", cfg.refine.eps_m, "Junction merge threshold")->check(CLI::NonNegativeNumber);
  app.add_option("--eps-t", cfg.refine.eps_t, "Prune threshold")->check(CLI::NonNegativeNumber);
  app.add_option("--eps-c", cfg.refine.eps_c, "Collapse threshold")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Seed for fixture generation");
  app.add_option("--bench", batch.bench, "Repeat each input N times and report the median")
      ->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the session service");
  skelforge::ServerOptions server_opts;
  std::string data_dir = skelforge::default_data_dir().string();
  serve->add_option("--host", server_opts.host, "Bind address");
  serve->add_option("--port", server_opts.port, "NDJSON port (HTTP listens on port + 1)");
  serve->add_option("--http-port", server_opts.http_port, "HTTP port");
  serve->add_option("--data-dir", data_dir, "Scene persistence directory");

  auto* fixtures = app.add_subcommand("fixtures", "Write the seeded fixture corpus");
  std::string fixtures_out = "fixtures";
  fixtures->add_option("--out", fixtures_out, "Corpus root");
  fixtures->add_option("--seed", seed, "Corpus seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      server_opts.data_dir = data_dir;
      // Worker threads inherit the mask; the main thread waits for the signal.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
      skelforge::Server server(server_opts);
      server.start();
      std::cerr << "listening on " << server_opts.host << ':' << server.port() << " (http " << server.http_port()
                << ")" << std::endl;
      int sig = 0;
      sigwait(&stop_signals, &sig);
      server.stop();
      return 0;
    }
    if (*fixtures) {
      const std::size_t n = skelforge::fixtures::write_corpus(fixtures_out, seed);
      std::cerr << "wrote " << n << " files under " << fixtures_out << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (inputs.empty()) {
    std::cerr << app.help();
    return 2;
  }
  for (const auto& in : inputs) batch.inputs.emplace_back(in);
  batch.out_dir = out_dir;
  if (!csv.empty()) batch.csv = csv;
  const skelforge::BatchReport report = skelforge::run_batch(batch, std::cerr);
  for (const auto& row : report.rows) {
    std::cout << row.name << ": " << row.n_vertices << " vertices, " << row.timings.total << " ms\n";
  }
  return report.exit_code();
}

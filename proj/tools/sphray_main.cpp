#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sphray/config.hpp"
#include "sphray/csv.hpp"
#include "sphray/runner.hpp"

// Exit codes: 0 success, 1 verification failure, 2 file I/O failure,
// 3 computation failure, 4 malformed config or data schema.

namespace {

constexpr int kExitIo = 2;
constexpr int kExitComputation = 3;
constexpr int kExitSchema = 4;

int read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "' for reading\n";
    return kExitIo;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    std::cerr << "error: failed while reading '" << path << "'\n";
    return kExitIo;
  }
  text = buf.str();
  return 0;
}

// Results are buffered and written in one piece so a failed run never leaves
// a truncated output file behind.
int write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return std::cout ? 0 : kExitIo;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitIo;
  }
  out << text << std::flush;
  if (!out) {
    std::cerr << "error: failed while writing '" << path << "'\n";
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Weighted geodesic transforms, transport recursion, and lead-term "
      "inversion on the sphere"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_path;
  std::string output_path;

  CLI::App* cmd_transform = app.add_subcommand(
      "transform", "Tabulate the weighted transform of a field over a geodesic grid");
  CLI::App* cmd_transport = app.add_subcommand(
      "transport", "Solve the transport recursion and report blow-up exponents");
  CLI::App* cmd_invert = app.add_subcommand(
      "invert", "Reconstruct an aradial lead term from a transform table");
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "Run the named invariant checks");
  for (CLI::App* sub : {cmd_transform, cmd_transport, cmd_invert, cmd_verify}) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--output", output_path, "output file (default: stdout)");
  }
  cmd_invert->add_option("--data", data_path, "transform table CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitSchema;
  }

  std::string config_text;
  if (const int rc = read_file(config_path, config_text); rc != 0) return rc;

  sphray::config::RunConfig cfg;
  try {
    cfg = sphray::config::parse_config(config_text);
  } catch (const sphray::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  }

  std::ostringstream out;
  int code = 0;
  try {
    if (cmd_transform->parsed()) {
      code = sphray::runner::run_transform(cfg, out);
    } else if (cmd_transport->parsed()) {
      code = sphray::runner::run_transport(cfg, out);
    } else if (cmd_invert->parsed()) {
      std::ifstream data(data_path, std::ios::binary);
      if (!data) {
        std::cerr << "error: cannot open '" << data_path << "' for reading\n";
        return kExitIo;
      }
      code = sphray::runner::run_invert(cfg, data, out);
    } else {
      code = sphray::runner::run_verify(cfg, out);
    }
  } catch (const sphray::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const sphray::csv::SchemaError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kExitComputation;
  }

  if (const int rc = write_output(output_path, out.str()); rc != 0) return rc;
  return code;
}

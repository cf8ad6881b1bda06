#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "velobound/report.hpp"
#include "velobound/runner.hpp"
#include "velobound/svg.hpp"

namespace {

int do_plot(const std::string& csv_path, std::string out_path) {
  try {
    const velobound::CsvFile csv = velobound::read_csv_file(csv_path);
    const std::string svg = velobound::render_experiment_svg(csv);
    if (out_path.empty()) {
      const std::size_t dot = csv_path.rfind('.');
      out_path = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".svg";
    }
    velobound::write_text_file(out_path, svg);
    std::cout << "wrote " << out_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;  // schema mismatch / unreadable input
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"velobound: pseudospectral velocity-bound and spectral-theory experiments"};
  app.require_subcommand(1);

  std::string run_config, validate_config, plot_csv, plot_out;

  CLI::App* run = app.add_subcommand("run", "execute every experiment in a config");
  run->add_option("config", run_config, "experiment config file")->required();

  CLI::App* validate =
      app.add_subcommand("validate", "parse a config and check preconditions only");
  validate->add_option("config", validate_config, "experiment config file")->required();

  CLI::App* plot = app.add_subcommand("plot", "render an experiment CSV as an SVG plot");
  plot->add_option("csv", plot_csv, "experiment report CSV")->required();
  plot->add_option("-o,--output", plot_out, "output SVG path (default: csv with .svg)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return velobound::run_config_file(run_config, false, std::cout).exit_code;
  if (validate->parsed())
    return velobound::run_config_file(validate_config, true, std::cout).exit_code;
  return do_plot(plot_csv, plot_out);
}

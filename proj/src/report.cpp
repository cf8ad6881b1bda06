#include "velobound/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "velobound/state.hpp"

namespace velobound {

namespace {

constexpr const char* kMagic = "# velobound v1";

void append_metadata(std::string& out,
                     const std::vector<std::pair<std::string, std::string>>& metadata) {
  for (const auto& [k, v] : metadata) {
    out += "# ";
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string render_experiment_csv(const ExperimentReport& rep) {
  std::string out = std::string(kMagic) + "\n";
  append_metadata(out, rep.metadata);
  if (rep.flagged) out += "# flagged=" + rep.flag_reason + "\n";
  out += "t,integrand,cumulative,boundary_mass\n";
  for (const auto& r : rep.rows) {
    out += format_number(r.t) + "," + format_number(r.integrand) + "," +
           format_number(r.cumulative) + "," + format_number(r.boundary_mass) + "\n";
  }
  return out;
}

std::string render_trace_csv(const EvolutionTrace& trace) {
  std::string out = std::string(kMagic) + "\n";
  out += "# method=" + trace.method + "\n";
  if (!trace.valid) out += "# flagged=" + trace.flag_reason + "\n";
  const int dim = trace.states.empty() ? 1 : trace.states.front().grid.dim;
  out += "t,norm,boundary_mass,energy";
  for (int d = 0; d < dim; ++d) out += ",centroid_" + std::to_string(d);
  out += "\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out += format_number(trace.times[i]) + "," + format_number(trace.norms[i]) + "," +
           format_number(trace.boundary[i]) + "," + format_number(trace.energies[i]);
    const auto c = centroid(trace.states[i]);
    for (int d = 0; d < dim; ++d) out += "," + format_number(c[d]);
    out += "\n";
  }
  return out;
}

std::string render_spectrum_csv(
    const std::vector<double>& eigenvalues,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
  std::string out = std::string(kMagic) + "\n";
  append_metadata(out, metadata);
  out += "index,lambda\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    out += std::to_string(i) + "," + format_number(eigenvalues[i]) + "\n";
  return out;
}

std::string render_mourre_csv(const MourreReport& rep) {
  std::string out = std::string(kMagic) + "\n";
  std::vector<std::pair<std::string, std::string>> metadata{
      {"rho", format_number(rep.rho)},
      {"lambda1", format_number(rep.lambda1)},
      {"lambda2", format_number(rep.lambda2)},
      {"delta_lo", format_number(rep.delta_lo)},
      {"delta_hi", format_number(rep.delta_hi)},
      {"g", format_number(rep.g.a) + "," + format_number(rep.g.a1) + "," +
                format_number(rep.g.b1) + "," + format_number(rep.g.b)},
      {"free_case", rep.free_case ? "1" : "0"},
      {"probes_used", std::to_string(rep.probes_used)},
      {"probes_skipped", std::to_string(rep.probes_skipped)},
      {"k_min_eigenvalue", format_number(rep.k_min_eigenvalue)},
      {"k_norm", format_number(rep.k_norm)},
  };
  append_metadata(out, metadata);
  out += "mode,lambda,qform,bound\n";
  for (const auto& r : rep.rows)
    out += r.mode + "," + format_number(r.lambda) + "," + format_number(r.qform) + "," +
           format_number(r.bound) + "\n";
  out += "# summary c_theory=" + format_number(rep.c_theory) +
         " observed_min=" + format_number(rep.observed_min) +
         " margin=" + format_number(rep.margin) + "\n";
  return out;
}

std::string render_relbound_csv(
    const std::vector<RelativeBoundPoint>& points,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
  std::string out = std::string(kMagic) + "\n";
  append_metadata(out, metadata);
  out += "delta,epsilon_eff,c_eff\n";
  for (const auto& p : points)
    out += format_number(p.delta) + "," + format_number(p.epsilon_eff) + "," +
           format_number(p.c_eff) + "\n";
  return out;
}

std::string render_remainder_csv(
    const RemainderDecay& decay,
    const std::vector<std::pair<std::string, std::string>>& metadata) {
  std::string out = std::string(kMagic) + "\n";
  append_metadata(out, metadata);
  out += "# slope=" + format_number(decay.slope) + "\n";
  out += "# at_floor=" + std::string(decay.at_floor ? "1" : "0") + "\n";
  out += "t,norm\n";
  for (std::size_t i = 0; i < decay.times.size(); ++i)
    out += format_number(decay.times[i]) + "," + format_number(decay.norms[i]) + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

int CsvFile::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

CsvFile parse_csv(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string line;
  CsvFile csv;
  bool saw_magic = false, saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!saw_magic) {
        if (line != kMagic)
          throw std::runtime_error("csv: missing '# velobound v1' magic line");
        saw_magic = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq != std::string::npos && eq > 2)
        csv.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!saw_magic) throw std::runtime_error("csv: missing '# velobound v1' magic line");
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!saw_header) {
      csv.columns = cells;
      if (csv.columns.empty()) throw std::runtime_error("csv: empty header");
      saw_header = true;
      continue;
    }
    if (cells.size() != csv.columns.size())
      throw std::runtime_error("csv: row width does not match header");
    std::vector<double> row(cells.size(), 0.0);
    std::string label;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      try {
        std::size_t pos = 0;
        row[i] = std::stod(cells[i], &pos);
        if (pos != cells[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        if (i == 0) {
          label = cells[i];  // textual first column (mourre mode labels)
          row[i] = 0.0;
        } else {
          throw std::runtime_error("csv: non-numeric cell '" + cells[i] + "'");
        }
      }
    }
    csv.rows.push_back(std::move(row));
    csv.labels.push_back(label);
  }
  if (!saw_magic) throw std::runtime_error("csv: empty input");
  if (!saw_header) throw std::runtime_error("csv: missing header line");
  return csv;
}

CsvFile read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace velobound

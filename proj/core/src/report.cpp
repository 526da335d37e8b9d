#include "ipm/report.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>

#include "ipm/error.hpp"

namespace ipm {

const char* version() { return IPM_VERSION; }

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError(fmt::format("cannot create directory {}: {}", dir.string(), ec.message()));
  }
}

void write_text(const std::filesystem::path& path, const std::string& text, bool overwrite) {
  if (!overwrite && std::filesystem::exists(path)) {
    throw IoError(fmt::format("{} exists; pass --force to overwrite", path.string()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

std::string diagnostics_csv(const std::vector<StepDiagnostics>& diag) {
  std::string out = "step,time,mean,l2,min,max,hs\n";
  for (std::size_t k = 0; k < diag.size(); ++k) {
    const auto& d = diag[k];
    out += fmt::format("{},{},{},{},{},{},{}\n", k, csv_number(d.time), csv_number(d.mean),
                       csv_number(d.l2), csv_number(d.min), csv_number(d.max), csv_number(d.hs));
  }
  return out;
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& dir, bool overwrite) {
  ensure_directory(dir);
  const Constants& c = report.constants;
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& text) {
    written.push_back(dir / name);
    write_text(written.back(), text, overwrite);
  };

  emit("constants.csv", fmt::format("m,L,d,C_tilde\n{},{},{},{}\n", csv_number(c.m),
                                    csv_number(c.L), csv_number(c.d), csv_number(c.c_tilde)));

  std::string prop3 = "n,r_n,input_dist,output_dist,flow_sep,sep_bound,disjoint_flag,verdict\n";
  std::string geometry = "n,contained,support_gap,drift,failure\n";
  std::string diag = "n,run,step,time,mean,l2,min,max,hs\n";
  for (const auto& r : report.records) {
    prop3 += fmt::format("{},{},{},{},{},{},{},{}\n", r.n, csv_number(r.r_n),
                         csv_number(r.input_dist), csv_number(r.output_dist),
                         csv_number(r.flow_sep), csv_number(r.sep_bound), r.disjoint ? 1 : 0,
                         r.verdict());
    std::string failure = r.failure;
    for (char& ch : failure) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    geometry += fmt::format("{},{},{},{},{}\n", r.n, r.contained ? 1 : 0,
                            csv_number(r.support_gap), csv_number(r.drift), failure);
    for (const auto* run : {&r.diagnostics, &r.diagnostics_tilde}) {
      const char* tag = run == &r.diagnostics ? "base" : "tilde";
      for (std::size_t k = 0; k < run->size(); ++k) {
        const auto& d = (*run)[k];
        diag += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.n, tag, k, csv_number(d.time),
                            csv_number(d.mean), csv_number(d.l2), csv_number(d.min),
                            csv_number(d.max), csv_number(d.hs));
      }
    }
  }
  emit("prop3.csv", prop3);
  emit("prop3_geometry.csv", geometry);
  emit("diagnostics.csv", diag);
  emit("prop3_summary.csv",
       fmt::format("rho_bar_norm,input_exact,output_floor,separation,disjoint,separation_slope,"
                   "passed\n{},{},{},{},{},{},{}\n",
                   csv_number(report.rho_bar_norm), int(report.input_exact),
                   int(report.output_floor), int(report.separation), int(report.disjoint),
                   csv_number(report.separation_slope), int(report.passed())));
  return written;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& cfg, bool overwrite) {
  ensure_directory(dir);
  write_text(dir / "manifest.txt",
             fmt::format("# ipmlab {}\n# command: {}\n\n{}", version(), command, echo_config(cfg)),
             overwrite);
}

}  // namespace ipm

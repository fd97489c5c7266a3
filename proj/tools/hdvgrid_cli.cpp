#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hdvgrid/hdvgrid.h"

namespace {

struct Overrides {
  std::optional<std::size_t> horizon;
  bool island = false;
  std::optional<double> wind_cap_on, wind_cap_off;
  std::optional<double> depot_scale, away_scale;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::string> scenarios;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--horizon", o.horizon, "Hours to model, a multiple of 24");
  cmd->add_flag("--island", o.island, "Disable interconnectors");
  cmd->add_option("--wind-cap-on", o.wind_cap_on, "Onshore wind capacity cap in MW");
  cmd->add_option("--wind-cap-off", o.wind_cap_off, "Offshore wind capacity cap in MW");
  cmd->add_option("--depot-scale", o.depot_scale, "Depot charging availability scalar");
  cmd->add_option("--away-scale", o.away_scale, "Away-from-depot charging availability scalar");
  cmd->add_option("--jobs", o.jobs, "Scenarios solved concurrently");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--scenarios", o.scenarios, "Comma-separated scenario kinds replacing the manifest list");
}

int exit_for(hdv_status s) {
  switch (s) {
    case HDV_OK: return 0;
    case HDV_NOT_OPTIMAL: return 1;
    default: return 2;
  }
}

int fail(hdv_status s) {
  std::fprintf(stderr, "error: %s\n", hdv_last_error());
  return exit_for(s);
}

hdv_status apply(hdv_manifest* m, const Overrides& o) {
  hdv_status s = HDV_OK;
  if (o.horizon && (s = hdv_manifest_set_horizon(m, *o.horizon)) != HDV_OK) return s;
  if (o.island && (s = hdv_manifest_set_island(m, 1)) != HDV_OK) return s;
  if (o.wind_cap_on || o.wind_cap_off) {
    if ((s = hdv_manifest_set_wind_caps(m, o.wind_cap_on.value_or(-1.0), o.wind_cap_off.value_or(-1.0))) != HDV_OK)
      return s;
  }
  if (o.depot_scale && (s = hdv_manifest_set_depot_scale(m, *o.depot_scale)) != HDV_OK) return s;
  if (o.away_scale && (s = hdv_manifest_set_away_scale(m, *o.away_scale)) != HDV_OK) return s;
  if (o.jobs && (s = hdv_manifest_set_jobs(m, *o.jobs)) != HDV_OK) return s;
  if (o.out && (s = hdv_manifest_set_out(m, o.out->c_str())) != HDV_OK) return s;
  if (o.scenarios && (s = hdv_manifest_set_scenarios(m, o.scenarios->c_str())) != HDV_OK) return s;
  return s;
}

void print_result(const hdv_result* r) {
  for (std::size_t i = 0; i < hdv_result_count(r); ++i) {
    double cost = 0.0;
    const bool has = hdv_result_metric(r, i, "total_cost_eur_yr", &cost) == HDV_OK;
    if (has)
      std::printf("%-28s %-12s %.6e EUR/yr\n", hdv_result_scenario(r, i), hdv_result_status(r, i), cost);
    else
      std::printf("%-28s %s\n", hdv_result_scenario(r, i), hdv_result_status(r, i));
  }
  std::fputs(hdv_result_log(r), stdout);
}

int run_or_sweep(const std::string& manifest, const Overrides& o, const std::string* axis) {
  hdv_manifest* m = nullptr;
  hdv_status s = hdv_manifest_load(manifest.c_str(), &m);
  if (s != HDV_OK) return fail(s);
  if ((s = apply(m, o)) != HDV_OK) {
    hdv_manifest_free(m);
    return fail(s);
  }
  hdv_result* r = nullptr;
  s = axis ? hdv_sweep(m, axis->c_str(), &r) : hdv_run(m, &r);
  hdv_manifest_free(m);
  if (!r) return fail(s);
  print_result(r);
  hdv_result_free(r);
  if (s != HDV_OK) {
    std::fprintf(stderr, "error: at least one scenario is not optimal\n");
    return exit_for(s);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power-sector capacity expansion with heavy-duty vehicle electrification"};
  app.set_version_flag("--version", std::string(hdv_version()));
  app.require_subcommand(1);

  std::string synth_cfg, fleet, fuel_chain, synth_out = "synth";
  std::size_t synth_horizon = 168;
  int anchor = 0;
  auto* synth = app.add_subcommand("synth", "Synthesize driving and charging profiles");
  synth->add_option("--config", synth_cfg, "Profile synthesis configuration")->required();
  synth->add_option("--fleet", fleet, "Fleet specification")->required();
  synth->add_option("--fuel-chain", fuel_chain, "Fuel chain specification");
  synth->add_option("--horizon", synth_horizon, "Hours to expand");
  synth->add_option("--anchor-weekday", anchor, "Weekday of hour 0, 0 = Monday")->check(CLI::Range(0, 6));
  synth->add_option("--out", synth_out, "Output directory");

  std::string run_manifest;
  Overrides run_o;
  auto* run = app.add_subcommand("run", "Solve every scenario of a manifest");
  run->add_option("manifest", run_manifest, "Run manifest")->required();
  add_overrides(run, run_o);

  std::string sweep_manifest, axis;
  Overrides sweep_o;
  auto* sweep = app.add_subcommand("sweep", "Sensitivity sweep over one axis");
  sweep->add_option("manifest", sweep_manifest, "Run manifest")->required();
  sweep->add_option("--axis", axis, "depot, away, windcap or island")
      ->required()
      ->check(CLI::IsMember({"depot", "away", "windcap", "island"}));
  add_overrides(sweep, sweep_o);

  std::string cmp_scenario, cmp_reference, cmp_out = "comparison.csv";
  auto* compare = app.add_subcommand("compare", "Difference of two scenario summaries");
  compare->add_option("scenario", cmp_scenario, "Scenario summary.json")->required();
  compare->add_option("reference", cmp_reference, "Reference summary.json")->required();
  compare->add_option("--out", cmp_out, "Output CSV");

  std::string model_path, solution_path;
  auto* solve = app.add_subcommand("solve", "Solve a model file in the text format");
  solve->add_option("model", model_path, "Model file")->required();
  solve->add_option("solution", solution_path, "Solution file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*synth) {
    std::size_t bins = 0, profiles = 0;
    const hdv_status s = hdv_synth(synth_cfg.c_str(), fleet.c_str(), fuel_chain.empty() ? nullptr : fuel_chain.c_str(),
                                   synth_horizon, anchor, synth_out.c_str(), &bins, &profiles);
    if (s != HDV_OK) return fail(s);
    std::printf("%zu stylized bins, %zu profiles written to %s\n", bins, profiles, synth_out.c_str());
    return 0;
  }
  if (*run) return run_or_sweep(run_manifest, run_o, nullptr);
  if (*sweep) return run_or_sweep(sweep_manifest, sweep_o, &axis);
  if (*compare) {
    const hdv_status s = hdv_compare(cmp_scenario.c_str(), cmp_reference.c_str(), cmp_out.c_str());
    if (s != HDV_OK) return fail(s);
    std::printf("%s\n", cmp_out.c_str());
    return 0;
  }
  if (*solve) {
    const hdv_status s = hdv_solve_file(model_path.c_str(), solution_path.c_str());
    if (s != HDV_OK && s != HDV_NOT_OPTIMAL) return fail(s);
    return exit_for(s);
  }
  return 2;
}

#include "hdvgrid/model_build.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace hdvgrid {

namespace {

std::string hour_tag(const std::string& prefix, std::size_t h) { return prefix + ":" + std::to_string(h); }

const std::vector<double>& series_or_throw(const CheckedScenario& sc, const std::string& name) {
  auto it = sc.catalog.series.find(name);
  if (it == sc.catalog.series.end()) throw ValidationError("missing series '" + name + "'");
  if (it->second.length() < sc.config.horizon)
    throw ValidationError("series '" + name + "' shorter than the horizon");
  return it->second.values;
}

}  // namespace

ScenarioModel build_core(const CheckedScenario& sc) {
  const auto& cat = sc.catalog;
  const auto& cfg = sc.config;
  const std::size_t H = cfg.horizon;
  ScenarioModel m;
  m.kind = cfg.kind;
  m.horizon = H;
  m.focal = cat.expandable_node();
  m.year_fraction = static_cast<double>(H) / kHoursPerYear;
  m.fixed_hdv_mw.assign(H, 0.0);
  auto& ir = m.ir;
  const double yf = m.year_fraction;

  for (const auto& n : cat.nodes) m.nodes.push_back(n.name);
  m.balance.resize(cat.nodes.size());
  m.shed.resize(cat.nodes.size());
  for (std::size_t n = 0; n < cat.nodes.size(); ++n) {
    const auto& load = series_or_throw(sc, cat.nodes[n].load);
    for (std::size_t h = 0; h < H; ++h) {
      const std::string suffix = cat.nodes[n].name + ":" + std::to_string(h);
      const int row = ir.add_constraint("bal:" + suffix, Sense::Equal, load[h]);
      m.balance[n].push_back(row);
      const int s = ir.add_variable("shed:" + suffix, 0.0, kInf, cfg.voll);
      ir.add_coefficient(row, s, 1.0);
      m.shed[n].push_back(s);
    }
  }

  // Category caps on wind: a bound when one technology carries the category,
  // a shared row otherwise.
  std::map<std::string, double> category_cap;
  if (cfg.wind_cap_onshore) category_cap["wind_onshore"] = *cfg.wind_cap_onshore;
  if (cfg.wind_cap_offshore) category_cap["wind_offshore"] = *cfg.wind_cap_offshore;
  std::map<std::string, std::vector<int>> category_vars;

  for (std::size_t n = 0; n < cat.nodes.size(); ++n) {
    const Node& node = cat.nodes[n];
    const bool expandable = n == m.focal;
    for (const auto& g : cat.generators) {
      GenVars gv;
      gv.node = n;
      gv.tech = g.name;
      const std::string base = node.name + ":" + g.name;
      if (expandable) {
        double upper = g.capacity_max;
        const int col = ir.add_variable("cap:" + base, g.capacity_min, upper,
                                        (g.investment_cost + g.fixed_om) * yf);
        gv.cap = col;
        if (category_cap.count(g.category)) category_vars[g.category].push_back(col);
      } else {
        auto it = node.fixed_capacity.find(g.name);
        if (it == node.fixed_capacity.end() || it->second <= 0.0) continue;
        gv.fixed_cap = it->second;
      }
      const std::vector<double>* avail =
          g.kind == GenKind::VariableRenewable ? &series_or_throw(sc, g.availability) : nullptr;
      const double mc = g.marginal_cost(cfg.co2_price);
      for (std::size_t h = 0; h < H; ++h) {
        const double a = avail ? (*avail)[h] : 1.0;
        const std::string tag = "gen:" + base + ":" + std::to_string(h);
        const double ub = gv.cap >= 0 ? kInf : gv.fixed_cap * a;
        const int x = ir.add_variable(tag, 0.0, ub, mc);
        ir.add_coefficient(m.balance[n][h], x, 1.0);
        if (gv.cap >= 0) {
          const int row = ir.add_constraint("gcap:" + base + ":" + std::to_string(h), Sense::LessEqual, 0.0);
          ir.add_coefficient(row, x, 1.0);
          ir.add_coefficient(row, gv.cap, -a);
        }
        gv.gen.push_back(x);
      }
      m.generators.push_back(std::move(gv));
    }

    for (const auto& s : cat.storages) {
      StorageVars sv;
      sv.node = n;
      sv.tech = s.name;
      const std::string base = node.name + ":" + s.name;
      if (expandable && !s.fixed) {
        sv.energy_cap = ir.add_variable("sto_e:" + base, s.energy_min, s.energy_max, s.energy_cost * yf);
        sv.charge_cap = ir.add_variable("sto_pin:" + base, s.power_min, s.power_max, s.charge_power_cost * yf);
        sv.discharge_cap =
            ir.add_variable("sto_pout:" + base, s.power_min, s.power_max, s.discharge_power_cost * yf);
      } else if (expandable) {
        sv.fixed_energy = s.energy_max;
        sv.fixed_charge = sv.fixed_discharge = s.power_max;
      } else {
        auto p = node.fixed_capacity.find(s.name);
        auto e = node.fixed_capacity.find(s.name + ".energy");
        if (p == node.fixed_capacity.end() || e == node.fixed_capacity.end()) continue;
        sv.fixed_charge = sv.fixed_discharge = p->second;
        sv.fixed_energy = e->second;
        if (sv.fixed_energy <= 0.0 || sv.fixed_charge <= 0.0) continue;
      }
      const bool variable = sv.energy_cap >= 0;
      for (std::size_t h = 0; h < H; ++h) {
        const std::string suffix = base + ":" + std::to_string(h);
        sv.charge.push_back(ir.add_variable("sto_ch:" + suffix, 0.0, variable ? kInf : sv.fixed_charge, 0.0));
        sv.discharge.push_back(
            ir.add_variable("sto_dis:" + suffix, 0.0, variable ? kInf : sv.fixed_discharge, 0.0));
        sv.level.push_back(ir.add_variable("sto_lvl:" + suffix, 0.0, variable ? kInf : sv.fixed_energy, 0.0));
      }
      for (std::size_t h = 0; h < H; ++h) {
        const std::string suffix = base + ":" + std::to_string(h);
        ir.add_coefficient(m.balance[n][h], sv.charge[h], -1.0);
        ir.add_coefficient(m.balance[n][h], sv.discharge[h], 1.0);
        // level_h = (1 - sigma) level_{h-1} + eta_in ch_h - dis_h / eta_out, cyclic
        const int row = ir.add_constraint("sto_bal:" + suffix, Sense::Equal, 0.0);
        ir.add_coefficient(row, sv.level[h], 1.0);
        ir.add_coefficient(row, sv.level[(h + H - 1) % H], -(1.0 - s.self_discharge));
        ir.add_coefficient(row, sv.charge[h], -s.charge_efficiency);
        ir.add_coefficient(row, sv.discharge[h], 1.0 / s.discharge_efficiency);
        if (variable) {
          const int le = ir.add_constraint("sto_ecap:" + suffix, Sense::LessEqual, 0.0);
          ir.add_coefficient(le, sv.level[h], 1.0);
          ir.add_coefficient(le, sv.energy_cap, -1.0);
          const int lc = ir.add_constraint("sto_ccap:" + suffix, Sense::LessEqual, 0.0);
          ir.add_coefficient(lc, sv.charge[h], 1.0);
          ir.add_coefficient(lc, sv.charge_cap, -1.0);
          const int ld = ir.add_constraint("sto_dcap:" + suffix, Sense::LessEqual, 0.0);
          ir.add_coefficient(ld, sv.discharge[h], 1.0);
          ir.add_coefficient(ld, sv.discharge_cap, -1.0);
        }
      }
      m.storages.push_back(std::move(sv));
    }
  }

  for (const auto& [category, vars] : category_vars) {
    const double cap = category_cap[category];
    if (vars.size() == 1) {
      auto& v = ir.variable(vars[0]);
      v.upper = std::min(v.upper, cap);
      v.lower = std::min(v.lower, v.upper);
    } else {
      const int row = ir.add_constraint("catcap:" + category, Sense::LessEqual, cap);
      for (int col : vars) ir.add_coefficient(row, col, 1.0);
    }
  }

  auto node_index = [&](const std::string& name) {
    for (std::size_t n = 0; n < cat.nodes.size(); ++n)
      if (cat.nodes[n].name == name) return n;
    throw ValidationError("unknown node '" + name + "'");
  };
  for (const auto& ic : cat.interconnectors) {
    FlowVars fv;
    fv.from = node_index(ic.from);
    fv.to = node_index(ic.to);
    for (std::size_t h = 0; h < H; ++h) {
      const int f = ir.add_variable("flow:" + ic.from + ":" + ic.to + ":" + std::to_string(h), 0.0,
                                    ic.ntc_forward, 0.0);
      const int b = ir.add_variable("flow:" + ic.to + ":" + ic.from + ":" + std::to_string(h), 0.0,
                                    ic.ntc_backward, 0.0);
      ir.add_coefficient(m.balance[fv.from][h], f, -1.0);
      ir.add_coefficient(m.balance[fv.to][h], f, 1.0 - ic.loss);
      ir.add_coefficient(m.balance[fv.to][h], b, -1.0);
      ir.add_coefficient(m.balance[fv.from][h], b, 1.0 - ic.loss);
      fv.forward.push_back(f);
      fv.backward.push_back(b);
    }
    m.flows.push_back(std::move(fv));
  }
  return m;
}

namespace {

void add_battery_fleet(ScenarioModel& m, const FleetSeries& series, const FleetSpec& fleet, bool v2g,
                       bool catenary) {
  if (series.horizon != m.horizon) throw ValidationError("fleet series horizon differs from the model");
  auto& ir = m.ir;
  const std::size_t H = m.horizon;
  const auto& bal = m.balance[m.focal];
  for (const auto& p : series.profiles) {
    const double cap = p.vehicles * fleet.battery_capacity_kwh / 1000.0;  // MWh
    for (std::size_t h = 0; h < H; ++h)
      if (p.drive_kwh[h] / 1000.0 > cap * (1.0 + 1e-12))
        throw ValidationError("profile " + p.id + ": driving energy in hour " + std::to_string(h) +
                              " exceeds the battery capacity");
    FleetVars fv;
    fv.id = p.id;
    for (std::size_t h = 0; h < H; ++h) {
      double conn = p.depot_kw[h] + p.stop_kw[h] + p.break_kw[h];
      double charge = conn + (catenary ? p.catenary_kw[h] : 0.0);
      fv.g2b.push_back(ir.add_variable(hour_tag("g2b:" + p.id, h), 0.0, charge / 1000.0, 0.0));
      if (v2g) fv.v2g.push_back(ir.add_variable(hour_tag("v2g:" + p.id, h), 0.0, conn / 1000.0, 0.0));
      fv.soc.push_back(ir.add_variable(hour_tag("soc:" + p.id, h), 0.0, cap, 0.0));
    }
    for (std::size_t h = 0; h < H; ++h) {
      ir.add_coefficient(bal[h], fv.g2b[h], -1.0);
      if (v2g) ir.add_coefficient(bal[h], fv.v2g[h], 1.0);
      // soc_h - soc_{h-1} - eta g2b_h + v2g_h / eta_dis = -drive_h
      const int row = ir.add_constraint(hour_tag("soc_bal:" + p.id, h), Sense::Equal, -p.drive_kwh[h] / 1000.0);
      ir.add_coefficient(row, fv.soc[h], 1.0);
      ir.add_coefficient(row, fv.soc[(h + H - 1) % H], -1.0);
      ir.add_coefficient(row, fv.g2b[h], -fleet.charging_efficiency);
      if (v2g) ir.add_coefficient(row, fv.v2g[h], 1.0 / fleet.discharge_efficiency);
    }
    m.fleet.push_back(std::move(fv));
  }
}

std::vector<double> catenary_wheel_mw(const FleetSeries& series) {
  std::vector<double> mw(series.horizon, 0.0);
  for (const auto& p : series.profiles)
    for (std::size_t h = 0; h < series.horizon; ++h) mw[h] += p.catenary_kwh[h] / 1000.0;
  return mw;
}

}  // namespace

void add_fixed_demand(ScenarioModel& m, const std::vector<double>& mw) {
  if (mw.size() != m.horizon) throw ValidationError("fixed demand length differs from the horizon");
  for (std::size_t h = 0; h < m.horizon; ++h) {
    m.ir.constraint(m.balance[m.focal][h]).rhs += mw[h];
    m.fixed_hdv_mw[h] += mw[h];
  }
}

void add_bev_block(ScenarioModel& m, const FleetSeries& series, const FleetSpec& fleet, bool v2g) {
  add_battery_fleet(m, series, fleet, v2g, false);
}

void add_ers_block(ScenarioModel& m, const FleetSeries& series, const FleetSpec& fleet, bool v2g) {
  add_fixed_demand(m, catenary_wheel_mw(series));
  add_battery_fleet(m, series, fleet, v2g, true);
}

void add_h2_block(ScenarioModel& m, const FuelDemand& demand, const FuelChainSpec& chain, H2Mode mode) {
  auto& ir = m.ir;
  const std::size_t H = m.horizon;
  if (demand.h2_kg.size() != H) throw ValidationError("fuel demand length differs from the horizon");
  const auto& bal = m.balance[m.focal];
  std::vector<double> need(H);
  for (std::size_t h = 0; h < H; ++h) need[h] = demand.h2_kg[h] * chain.h2_energy_kwh_per_kg / 1000.0;
  const double avg = std::accumulate(need.begin(), need.end(), 0.0) / static_cast<double>(H);

  m.transport_factor = mode == H2Mode::Central ? chain.transport_kwh_per_kg / chain.h2_energy_kwh_per_kg : 0.0;
  const double store_max = mode == H2Mode::Central ? chain.h2_storage_max : chain.onsite_buffer_hours * avg;
  m.h2_store_cap = ir.add_variable("h2_sto", 0.0, store_max, chain.h2_storage_cost * m.year_fraction);
  for (std::size_t h = 0; h < H; ++h) m.h2_level.push_back(ir.add_variable(hour_tag("h2_lvl", h), 0.0, kInf, 0.0));

  std::vector<int> rows(H);
  for (std::size_t h = 0; h < H; ++h) {
    // level_h - level_{h-1} - sum eta draw = -demand_h
    rows[h] = ir.add_constraint(hour_tag("h2_bal", h), Sense::Equal, -need[h]);
    ir.add_coefficient(rows[h], m.h2_level[h], 1.0);
    ir.add_coefficient(rows[h], m.h2_level[(h + H - 1) % H], -1.0);
    const int cap = ir.add_constraint(hour_tag("h2_cap", h), Sense::LessEqual, 0.0);
    ir.add_coefficient(cap, m.h2_level[h], 1.0);
    ir.add_coefficient(cap, m.h2_store_cap, -1.0);
  }
  for (const auto& e : chain.electrolyzers) {
    ElectrolyzerVars ev;
    ev.tech = e.name;
    ev.efficiency = e.efficiency;
    ev.cap = ir.add_variable("ely_cap:" + e.name, 0.0, kInf, e.investment_cost * m.year_fraction);
    for (std::size_t h = 0; h < H; ++h) {
      const int d = ir.add_variable("ely:" + e.name + ":" + std::to_string(h), 0.0, kInf, 0.0);
      ev.draw.push_back(d);
      ir.add_coefficient(bal[h], d, -(1.0 + e.efficiency * m.transport_factor));
      ir.add_coefficient(rows[h], d, -e.efficiency);
      const int cap = ir.add_constraint("ely_lim:" + e.name + ":" + std::to_string(h), Sense::LessEqual, 0.0);
      ir.add_coefficient(cap, d, 1.0);
      ir.add_coefficient(cap, ev.cap, -1.0);
    }
    m.electrolyzers.push_back(std::move(ev));
  }
}

void add_ptl_block(ScenarioModel& m, const FuelDemand& demand, const FuelChainSpec& chain) {
  auto& ir = m.ir;
  const std::size_t H = m.horizon;
  if (demand.diesel_l.size() != H) throw ValidationError("fuel demand length differs from the horizon");
  // Hydrogen stage without liquefaction; the H2 balance is fed to synthesis
  // instead of vehicles.
  FuelDemand none;
  none.h2_kg.assign(H, 0.0);
  FuelChainSpec h2 = chain;
  h2.transport_kwh_per_kg = 0.0;
  add_h2_block(m, none, h2, H2Mode::Central);

  std::vector<double> need(H);
  for (std::size_t h = 0; h < H; ++h) need[h] = demand.diesel_l[h] * chain.diesel_energy_kwh_per_l / 1000.0;
  m.synthesis_cap = ir.add_variable("syn_cap", 0.0, kInf, chain.synthesis_investment_cost * m.year_fraction);
  m.liquid_store_cap = ir.add_variable("liq_sto", 0.0, kInf, chain.liquid_storage_cost * m.year_fraction);
  for (std::size_t h = 0; h < H; ++h) {
    m.synthesis.push_back(ir.add_variable(hour_tag("syn", h), 0.0, kInf, 0.0));
    m.liquid_level.push_back(ir.add_variable(hour_tag("liq_lvl", h), 0.0, kInf, 0.0));
  }
  for (std::size_t h = 0; h < H; ++h) {
    const int h2row = ir.find_constraint(hour_tag("h2_bal", h));
    ir.add_coefficient(h2row, m.synthesis[h], 1.0);
    const int lim = ir.add_constraint(hour_tag("syn_lim", h), Sense::LessEqual, 0.0);
    ir.add_coefficient(lim, m.synthesis[h], 1.0);
    ir.add_coefficient(lim, m.synthesis_cap, -1.0);
    const int row = ir.add_constraint(hour_tag("liq_bal", h), Sense::Equal, -need[h]);
    ir.add_coefficient(row, m.liquid_level[h], 1.0);
    ir.add_coefficient(row, m.liquid_level[(h + H - 1) % H], -1.0);
    ir.add_coefficient(row, m.synthesis[h], -chain.synthesis_efficiency);
    const int cap = ir.add_constraint(hour_tag("liq_cap", h), Sense::LessEqual, 0.0);
    ir.add_coefficient(cap, m.liquid_level[h], 1.0);
    ir.add_coefficient(cap, m.liquid_store_cap, -1.0);
  }
}

ScenarioModel build_scenario_model(const CheckedScenario& sc, const HdvInputs& hdv) {
  ScenarioModel m = build_core(sc);
  const ScenarioKind k = sc.config.kind;
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw ValidationError("scenario " + std::string(to_string(k)) + ": " + what + " required");
  };
  if (uses_battery_fleet(k)) {
    need(hdv.fleet_series.has_value(), "fleet series");
    const FleetSpec& fleet = *sc.fleet;
    if (is_inflexible(k)) {
      need(hdv.plan.has_value(), "balanced charging plan");
      if (uses_catenary(k)) add_fixed_demand(m, catenary_wheel_mw(*hdv.fleet_series));
      std::vector<double> mw = hdv.plan->total_grid_kw();
      for (double& v : mw) v /= 1000.0;
      add_fixed_demand(m, mw);
    } else if (uses_catenary(k)) {
      add_ers_block(m, *hdv.fleet_series, fleet, allows_v2g(k) && fleet.v2g_allowed);
    } else {
      add_bev_block(m, *hdv.fleet_series, fleet, allows_v2g(k) && fleet.v2g_allowed);
    }
  } else if (uses_fuel_chain(k)) {
    need(hdv.fuel.has_value(), "fuel demand");
    if (k == ScenarioKind::ICEV_PTL) add_ptl_block(m, *hdv.fuel, *sc.chain);
    else add_h2_block(m, *hdv.fuel, *sc.chain, k == ScenarioKind::FCEV_CENTRAL ? H2Mode::Central : H2Mode::Onsite);
  }
  return m;
}

ScenarioConfig apply_sensitivities(ScenarioConfig cfg, const Sensitivities& s) {
  if (s.island) cfg.island = *s.island;
  if (s.wind_cap_onshore) cfg.wind_cap_onshore = s.wind_cap_onshore;
  if (s.wind_cap_offshore) cfg.wind_cap_offshore = s.wind_cap_offshore;
  if (s.depot_scale) cfg.depot_scale = *s.depot_scale;
  if (s.away_scale) cfg.away_scale = *s.away_scale;
  validate(cfg);
  return cfg;
}

}  // namespace hdvgrid

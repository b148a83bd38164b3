#pragma once

#include <string>
#include <vector>

#include "bbmsf/config.hpp"
#include "bbmsf/design_engine.hpp"
#include "bbmsf/dmppt_string.hpp"
#include "bbmsf/small_signal.hpp"
#include "bbmsf/steady_state.hpp"
#include "bbmsf/switched_sim.hpp"
#include "json.hpp"

namespace bbmsf {

using ordered_json = nlohmann::ordered_json;

/// Rounds to 9 significant digits so emitted reports are byte-stable.
double round_sig9(double x);

ordered_json steady_state_json(const ConverterParams& p, const LoadModel& load,
                               const SteadyStateReport& r);

ordered_json loss_json(const LossReport& losses, const std::string& at);

ordered_json design_report_json(const DesignRequest& req);

ordered_json scenario_json(const ScenarioResult& r);

/// Table with one row per entry: label, count, power, v_pv, v_o, i_string,
/// duty, mode, feasible.
std::string scenario_csv(const ScenarioResult& r);

/// `t,interval,il,ilm,vo,i_s,i_d1,i_d2,i_dd,v_s,v_d1,v_d2,v_dd`, full precision.
std::string waveform_csv(const PeriodicWaveform& w);

/// `f_hz,mag_db,phase_deg,kind,method`.
std::string bode_csv(const std::vector<FrequencyResponse>& responses);

}  // namespace bbmsf

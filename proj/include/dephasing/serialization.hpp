// serialization.hpp: JSON models and reports, CSV curves and sample files

#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dephasing/asymptotics.hpp"
#include "dephasing/dynamics.hpp"
#include "dephasing/embedfit.hpp"
#include "dephasing/qrf.hpp"
#include "dephasing/spectral.hpp"

namespace dephasing::io {

using Json = nlohmann::ordered_json;

// Throws ConfigError naming the first key of `object` outside `allowed`.
void require_known_keys(const Json& object, std::initializer_list<std::string_view> allowed,
                        std::string_view context);

// {"kind": "ohmic_exp"|"drude_lorentz"|"power_law"|"tabulated", "omega_scale", "exponent",
//  "coupling2", "table": [[ω, J], ...], "lowfreq": [γ_J, c]}
spectral::SpectralDensity density_from_json(const Json& j);
Json density_to_json(const spectral::SpectralDensity& d);

// {"beta": number or "inf", "density": {...}}
spectral::BathSpec bath_from_json(const Json& j);
Json bath_to_json(const spectral::BathSpec& b);
Json beta_to_json(double beta);

Json regime_to_json(const spectral::Regime& regime);
Json residual_report_to_json(const asymptotics::ResidualReport& report);
Json qrf_report_to_json(const qrf::QrfReport& report);
Json fit_report_to_json(const embedfit::FitReport& report);

// %.17g
std::string format_double(double value);

// t,gamma,abs_coherence,rate
void write_curve_csv(std::ostream& out, const dynamics::DephasingCurve& curve);
// t,exact,law,residual[,normalized]
void write_residual_csv(std::ostream& out, const asymptotics::ResidualReport& report);
// omega,g_abs2
void write_finite_bath_csv(std::ostream& out, const dynamics::FiniteBath& bath);

// CSV with header `t,value`.
std::vector<embedfit::Sample> read_samples_csv(std::istream& in);

}  // namespace dephasing::io

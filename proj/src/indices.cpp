#include "carbon_quota/indices.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cquota {
namespace {

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double window_value(const Dataset& data, const std::string& code, TapioWindow w, TapioSource source) {
  std::optional<double> v;
  std::string why = "no value";
  switch (source) {
    case TapioSource::Override:
      v = data.tapio_override(code, w);
      why = "no override loaded";
      break;
    case TapioSource::Deltas:
      if (const auto* d = data.tapio_delta(code, w)) {
        v = tapio_from_deltas(d->dgdp_pct, d->dghg_pct);
        why = "zero GDP change";
      } else {
        why = "no delta row loaded";
      }
      break;
    case TapioSource::Raw:
      v = tapio_window(data.series_for(code, Variable::GdpPerCapita),
                       data.series_for(code, Variable::GhgPerCapita), window_start(w), kTapioEndYear);
      why = "zero GDP change";
      break;
  }
  if (!v) {
    throw std::invalid_argument("Tapio " + std::string(to_string(w)) + " for " + code + " unavailable (" +
                                why + ")");
  }
  return *v;
}

}  // namespace

std::string_view to_string(StudyLabel label) {
  return label == StudyLabel::Study2016_2019 ? "2016-2019" : "2019";
}

std::optional<StudyLabel> parse_study(std::string_view s) {
  if (s == "2016-2019") return StudyLabel::Study2016_2019;
  if (s == "2019") return StudyLabel::Study2019;
  return std::nullopt;
}

std::optional<YearSpan> parse_year_span(std::string_view s) {
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    const auto y = to_int(s);
    if (!y) return std::nullopt;
    return YearSpan{*y, *y};
  }
  const auto a = to_int(s.substr(0, dash));
  const auto b = to_int(s.substr(dash + 1));
  if (!a || !b || *b < *a) return std::nullopt;
  return YearSpan{*a, *b};
}

std::string to_string(YearSpan span) {
  if (span.from == span.to) return std::to_string(span.from);
  return std::to_string(span.from) + "-" + std::to_string(span.to);
}

StudyWindow study_window(StudyLabel label) {
  if (label == StudyLabel::Study2016_2019) {
    return {label, {2016, 2019}, {2019, 2019}, {TapioWindow::W3, TapioWindow::W2, TapioWindow::W1}, true};
  }
  return {label, {2019, 2019}, {2019, 2019}, {TapioWindow::W1}, false};
}

std::string_view to_string(TapioSource s) {
  switch (s) {
    case TapioSource::Raw: return "raw";
    case TapioSource::Deltas: return "deltas";
    case TapioSource::Override: return "override";
  }
  return "?";
}

std::optional<TapioSource> parse_tapio_source(std::string_view s) {
  if (s == "raw") return TapioSource::Raw;
  if (s == "deltas") return TapioSource::Deltas;
  if (s == "override") return TapioSource::Override;
  return std::nullopt;
}

CountryValues capability_index(const CountryValues& gdpcap, double gdpcap_eu) {
  if (!(gdpcap_eu > 0.0)) throw std::invalid_argument("capability_index: EU GDP per capita must be positive");
  CountryValues ratios;
  ratios.reserve(gdpcap.size());
  for (const auto& g : gdpcap) {
    if (!(g.value > 0.0)) throw std::invalid_argument("capability_index: non-positive GDP for " + g.code);
    ratios.push_back({g.code, gdpcap_eu / g.value});
  }
  const double total = sum_values(ratios);
  for (auto& r : ratios) r.value /= total;
  return ratios;
}

std::optional<double> tapio_window(const CountrySeries& gdpcap, const CountrySeries& ghgcap, int from, int to) {
  const double g0 = gdpcap.at(from);
  const double e0 = ghgcap.at(from);
  if (g0 == 0.0 || e0 == 0.0) {
    throw std::invalid_argument("tapio_window: zero base value for " + gdpcap.country);
  }
  return tapio_from_deltas(100.0 * (gdpcap.at(to) - g0) / g0, 100.0 * (ghgcap.at(to) - e0) / e0);
}

std::optional<double> tapio_from_deltas(double dgdp_pct, double dghg_pct) {
  if (dgdp_pct == 0.0) return std::nullopt;
  return dghg_pct / dgdp_pct;
}

double average_tapio(std::span<const double> window_values) {
  if (window_values.empty()) throw std::invalid_argument("average_tapio: missing window");
  return std::accumulate(window_values.begin(), window_values.end(), 0.0) /
         static_cast<double>(window_values.size());
}

CountryValues rescale_tapio(const CountryValues& tapio) {
  std::optional<double> m;
  for (const auto& t : tapio) {
    if (is_member_state(t.code) && (!m || t.value > *m)) m = t.value;
  }
  // Without Member States the largest value overall serves as anchor.
  if (!m) {
    for (const auto& t : tapio) {
      if (!m || t.value > *m) m = t.value;
    }
  }
  CountryValues out = tapio;
  if (!m) return out;
  const double shift = *m + 1.0;
  for (auto& t : out) t.value -= shift;
  return out;
}

DecouplingShares decoupling_shares(const CountryValues& rescaled, double rescaled_eu) {
  if (rescaled_eu == 0.0) throw std::invalid_argument("decoupling_shares: zero EU value");
  DecouplingShares out;
  for (const auto& r : rescaled) {
    if (!(r.value < 0.0)) throw std::invalid_argument("decoupling_shares: non-negative rescaled value for " + r.code);
    const double di = r.value / rescaled_eu;
    out.di.push_back({r.code, di});
    out.inv_di.push_back({r.code, 1.0 / di});
  }
  const double total = sum_values(out.inv_di);
  for (const auto& v : out.inv_di) out.share.push_back({v.code, v.value / total});
  return out;
}

CountryValues inertia_index(const CountryValues& ghg, double ghg_eu) {
  if (!(ghg_eu > 0.0)) throw std::invalid_argument("inertia_index: EU emissions must be positive");
  CountryValues out;
  out.reserve(ghg.size());
  for (const auto& g : ghg) out.push_back({g.code, g.value / ghg_eu});
  return out;
}

const IndexRow& IndexSet::row(std::string_view code) const {
  if (code == kEu27Code) return eu27;
  for (const auto& r : rows) {
    if (r.country == code) return r;
  }
  throw std::out_of_range("no index row for " + std::string(code));
}

CountryValues IndexSet::capability() const {
  CountryValues v;
  for (const auto& r : rows) v.push_back({r.country, r.ci});
  return v;
}

CountryValues IndexSet::decoupling() const {
  CountryValues v;
  for (const auto& r : rows) v.push_back({r.country, r.decoupling_share});
  return v;
}

CountryValues IndexSet::inertia() const {
  CountryValues v;
  for (const auto& r : rows) v.push_back({r.country, r.ii});
  return v;
}

CountryValues IndexSet::tapio() const {
  CountryValues v;
  for (const auto& r : rows) v.push_back({r.country, r.tapio});
  return v;
}

IndexSet compute_index_set(const Dataset& data, const StudyWindow& study, TapioSource source) {
  IndexSet set;
  set.study = study;
  set.source = source;

  auto fill_tapio = [&](IndexRow& row) {
    std::vector<double> values;
    for (const auto w : study.tapio_windows) {
      const double v = window_value(data, row.country, w, source);
      row.windows[w] = v;
      values.push_back(v);
    }
    const auto avg = source == TapioSource::Override && study.prefer_avg_override
                         ? data.tapio_override(row.country, TapioWindow::Avg)
                         : std::nullopt;
    row.tapio = avg ? *avg : average_tapio(values);
  };

  CountryValues gdp;
  CountryValues ghg;
  CountryValues tapio;
  for (const auto& c : member_states()) {
    IndexRow row;
    row.country = c.code;
    fill_tapio(row);
    tapio.push_back({c.code, row.tapio});
    gdp.push_back({c.code, data.series_for(c.code, Variable::GdpPerCapita).mean(study.gdp.from, study.gdp.to)});
    ghg.push_back({c.code, data.series_for(c.code, Variable::GhgTotal).mean(study.ghg.from, study.ghg.to)});
    set.rows.push_back(std::move(row));
  }
  set.eu27.country = std::string(kEu27Code);
  fill_tapio(set.eu27);
  tapio.push_back({set.eu27.country, set.eu27.tapio});

  const auto ci = capability_index(
      gdp, data.series_for(kEu27Code, Variable::GdpPerCapita).mean(study.gdp.from, study.gdp.to));
  const auto ii =
      inertia_index(ghg, data.series_for(kEu27Code, Variable::GhgTotal).mean(study.ghg.from, study.ghg.to));
  const auto rescaled = rescale_tapio(tapio);
  CountryValues rescaled_ms(rescaled.begin(), rescaled.end() - 1);
  const double rescaled_eu = rescaled.back().value;
  const auto shares = decoupling_shares(rescaled_ms, rescaled_eu);

  for (std::size_t i = 0; i < set.rows.size(); ++i) {
    auto& r = set.rows[i];
    r.ci = ci[i].value;
    r.ii = ii[i].value;
    r.tapio_rescaled = rescaled_ms[i].value;
    r.di = shares.di[i].value;
    r.decoupling_share = shares.share[i].value;
  }
  set.eu27.tapio_rescaled = rescaled_eu;
  set.eu27.di = 1.0;

  const double ii_sum = sum_values(ii);
  if (std::abs(ii_sum - 1.0) > 1e-3) {
    set.notes.push_back("Member State emissions sum to " + std::to_string(ii_sum) +
                        " of the EU27 total; inertia budgets do not add up to CB_EU27");
  }
  if (source == TapioSource::Deltas) {
    for (const auto& w : data.warnings) set.notes.push_back(w);
  }
  return set;
}

}  // namespace cquota

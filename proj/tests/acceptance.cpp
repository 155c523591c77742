// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Monte-Carlo criteria run the library
// entry points used by the CLI with the default configuration.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ftwnb/classifiers.hpp"
#include "ftwnb/experiment.hpp"
#include "ftwnb/features.hpp"
#include "ftwnb/metrics.hpp"

using namespace ftwnb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* name, double budget_s,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = s < budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %-4s %-34s %s | %.2fs (budget %.0fs)%s\n", ok ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), s, budget_s, in_time ? "" : " OVER BUDGET");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <typename... A>
std::string fmtn(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

CptModel random_cpt(std::size_t features, std::size_t bins, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> e;
  for (std::size_t j = 1; j < bins; ++j) e.push_back(static_cast<double>(j));
  std::vector<std::vector<double>> edges(features, e);
  std::vector<std::array<CptModel::Table, kNumClasses>> tables(features);
  for (auto& t : tables) {
    for (auto& v : t) {
      v.resize(bins);
      double sum = 0.0;
      for (auto& x : v) sum += (x = u(rng));
      for (auto& x : v) x /= sum;
    }
  }
  const double p = std::uniform_real_distribution<double>(0.02, 0.98)(rng);
  return CptModel(Discretizer(edges), {p, 1.0 - p}, tables, 1.0);
}

// ---- independent oracles -------------------------------------------------

double plugin_mi(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::map<std::size_t, double> pa, pb;
  const double n = static_cast<double>(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    joint[{a[k], b[k]}] += 1.0;
    pa[a[k]] += 1.0;
    pb[b[k]] += 1.0;
  }
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    mi += c / n * std::log(c * n / (pa[key.first] * pb[key.second]));
  }
  return std::max(mi, 0.0);
}

double mann_whitney(const std::vector<double>& s, const std::vector<ClassLabel>& t) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (t[a] != ClassLabel::Nlos) continue;
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (t[b] != ClassLabel::Los) continue;
      pairs += 1.0;
      wins += s[a] > s[b] ? 1.0 : (s[a] == s[b] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  return cfg;
}

double mean_of(const std::vector<double>& v) { return summarize(v).mean; }

std::map<std::string, Json> reports;  // kept for the determinism check

}  // namespace

int main() {
  std::printf("FT-WNB acceptance suite\n");

  criterion("1", "metric arithmetic", 1.0, [] {
    const auto m = summary_metrics({995, 5, 2, 98});
    const double da = std::abs(m.accuracy - 1093.0 / 1100.0);
    const double dr = std::abs(m.recall - 0.995);
    const double dn = std::abs(m.nlos_correct_rate - 0.98);
    const bool ok = da <= 1e-12 && dr <= 1e-12 && dn <= 1e-12;
    return Outcome{ok, fmtn("acc=%.6f recall=%.6f nlos=%.6f max|err|=%.1e (tol 1e-12)",
                            m.accuracy, m.recall, m.nlos_correct_rate, std::max({da, dr, dn}))};
  });

  criterion("2", "reduction chain FT-WNB=WNB=NB", 5.0, [] {
    std::size_t mismatches = 0, compared = 0;
    FtWnbConfig cfg;
    cfg.finetune_cap = 0;
    cfg.weights = WeightScheme::Unit;
    const auto s = builtin_scenario("studio");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto train = generate_samples(s, 1000, 100, 1000 + seed);
      const auto test = generate_samples(s, 500, 500, 2000 + seed);
      const auto ft = ftwnb_predict(ftwnb_train(train, cfg), test);
      const auto wnb = ftwnb_predict(wnb_train(train, cfg), test);
      const auto nb = ftwnb_predict(nb_train(train, cfg), test);
      for (std::size_t k = 0; k < test.size(); ++k) {
        ++compared;
        mismatches += ft[k].label != wnb[k].label || wnb[k].label != nb[k].label;
      }
    }
    return Outcome{mismatches == 0,
                   fmtn("%zu label mismatches over %zu predictions (5 seeds x 1000)", mismatches,
                        compared)};
  });

  criterion("3", "fine-tuning hand oracle", 1.0, [] {
    // Three features, priors giving e = 0.818, one LoS instance predicted NLoS.
    const double alpha = 0.5, beta = 0.1;
    const std::array<double, 2> priors{0.909, 0.091};
    const std::vector<std::array<std::vector<double>, 2>> t{
        {{{0.1, 0.1, 0.2, 0.6}, {0.4, 0.3, 0.2, 0.1}}},
        {{{0.5, 0.3, 0.2}, {0.1, 0.1, 0.8}}},
        {{{0.25, 0.25, 0.25, 0.25}, {0.05, 0.15, 0.3, 0.5}}},
    };
    const BinVector bins{2, 0, 3};
    CptModel cpt(Discretizer({{1, 2, 3}, {1, 2}, {1, 2, 3}}), priors,
                 {{t[0][0], t[0][1]}, {t[1][0], t[1][1]}, {t[2][0], t[2][1]}}, 1.0);
    std::vector<FinetuneUpdate> trace;
    finetune_step(cpt, bins, ClassLabel::Los, ClassLabel::Nlos, alpha, beta, &trace);
    const double e = std::abs(priors[0] - priors[1]);
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& T = t[i][0];
      const auto& P = t[i][1];
      const double xt = beta * (alpha * *std::max_element(T.begin(), T.end()) - T[bins[i]]) * e;
      const double xp = beta * (alpha * P[bins[i]] - *std::min_element(P.begin(), P.end())) * e;
      worst = std::max({worst, std::abs(trace[i].xi_true - xt), std::abs(trace[i].xi_pred - xp),
                        std::abs(trace[i].raw_true - (T[bins[i]] + xt)),
                        std::abs(trace[i].raw_pred - (P[bins[i]] - xp))});
    }
    const double worked = std::abs(trace[0].xi_true - 0.00818);
    const double entry = std::abs(trace[0].raw_true - 0.20818);
    const bool ok = worst <= 1e-9 && worked <= 1e-9 && entry <= 1e-9;
    return Outcome{ok, fmtn("xi_T=%.8f entry=%.8f max|err| vs hand=%.1e (tol 1e-9)",
                            trace[0].xi_true, trace[0].raw_true, std::max({worst, worked, entry}))};
  });

  criterion("4", "simplex preservation", 30.0, [] {
    std::mt19937_64 rng(4);
    double worst_sum = 0.0;
    double min_entry = 1.0;
    std::size_t steps = 0;
    while (steps < 10000) {
      auto cpt = random_cpt(1 + rng() % 6, 1 + rng() % 12, rng);
      // Chains of updates on the same tables push entries toward the floor.
      for (int k = 0; k < 100; ++k, ++steps) {
        BinVector bins;
        for (std::size_t i = 0; i < cpt.num_features(); ++i) {
          bins.push_back(rng() % cpt.discretizer().num_bins(i));
        }
        const auto truth = rng() % 2 ? ClassLabel::Nlos : ClassLabel::Los;
        const double a = std::uniform_real_distribution<double>(0.001, 0.999)(rng);
        const double b = std::uniform_real_distribution<double>(0.001, 0.999)(rng);
        cpt = finetune_step(cpt, bins, truth, other(truth), a, b);
        worst_sum = std::max(worst_sum, cpt.max_normalization_error());
        for (std::size_t i = 0; i < cpt.num_features(); ++i) {
          for (auto l : {ClassLabel::Los, ClassLabel::Nlos}) {
            for (double v : cpt.table(i, l)) min_entry = std::min(min_entry, v);
          }
        }
      }
    }
    const bool ok = worst_sum <= 1e-9 && min_entry > 0.0;
    return Outcome{ok, fmtn("%zu steps: max|sum-1|=%.1e (tol 1e-9), min entry=%.2e", steps,
                            worst_sum, min_entry)};
  });

  criterion("5", "brute-force oracles", 60.0, [] {
    std::mt19937_64 rng(5);
    // (a) NB / WNB against exhaustive enumeration over every input.
    std::size_t label_bad = 0, inputs = 0;
    double score_err = 0.0;
    for (int c = 0; c < 1000; ++c) {
      const auto cpt = random_cpt(3, 4, rng);
      AttributeWeights w{{0.0, 0.0, 0.0}};
      for (auto& x : w.w) x = std::uniform_real_distribution<double>(0.1, 2.5)(rng);
      for (std::size_t code = 0; code < 64; ++code) {
        const BinVector bins{code % 4, (code / 4) % 4, code / 16};
        for (int weighted = 0; weighted < 2; ++weighted) {
          double joint[2];
          for (auto l : {ClassLabel::Los, ClassLabel::Nlos}) {
            double p = cpt.prior(l);
            for (std::size_t i = 0; i < 3; ++i) {
              p *= std::pow(cpt.table(i, l)[bins[i]], weighted ? w[i] : 1.0);
            }
            joint[index_of(l)] = p;
          }
          const auto expected = joint[1] > joint[0] ? ClassLabel::Nlos : ClassLabel::Los;
          const double post = joint[1] / (joint[0] + joint[1]);
          const auto got = weighted ? wnb_predict(cpt, w, bins) : nb_predict(cpt, bins);
          ++inputs;
          label_bad += got.label != expected;
          score_err = std::max(score_err, std::abs(got.score - post));
        }
      }
    }
    // (b) mRMR first two picks against the greedy objective evaluated directly.
    std::size_t mrmr_bad = 0;
    for (int c = 0; c < 200; ++c) {
      const std::size_t p = 2 + rng() % 5, n = 40 + rng() % 200;
      BinnedDataset d;
      std::vector<std::vector<double>> edges(p, std::vector<double>{1, 2});
      d.discretizer = Discretizer(edges);
      std::vector<std::vector<std::size_t>> cols(p, std::vector<std::size_t>(n));
      std::vector<std::size_t> y(n);
      for (std::size_t k = 0; k < n; ++k) {
        y[k] = k < 2 ? k : rng() % 2;
        d.labels.push_back(y[k] ? ClassLabel::Nlos : ClassLabel::Los);
        BinVector row;
        for (std::size_t i = 0; i < p; ++i) {
          const auto noise = rng() % 3;
          cols[i][k] = (rng() % (i + 2) == 0) ? noise : (y[k] + noise * (rng() % 2)) % 3;
          row.push_back(cols[i][k]);
        }
        d.bins.push_back(row);
      }
      std::size_t first = 0;
      double best = -1e300;
      for (std::size_t i = 0; i < p; ++i) {
        const double v = plugin_mi(cols[i], y);
        if (v > best + 1e-12) best = v, first = i;
      }
      std::size_t second = 0;
      best = -1e300;
      for (std::size_t i = 0; i < p; ++i) {
        if (i == first) continue;
        const double v = plugin_mi(cols[i], y) - plugin_mi(cols[i], cols[first]);
        if (v > best + 1e-12) best = v, second = i;
      }
      const auto sel = mrmr_select(d, 2);
      mrmr_bad += sel[0] != first || sel[1] != second;
    }
    // (c) AUC against Mann-Whitney.
    double auc_err = 0.0;
    for (int c = 0; c < 1000; ++c) {
      const std::size_t n = 2 + rng() % 60;
      std::vector<double> s(n);
      std::vector<ClassLabel> t(n);
      for (std::size_t k = 0; k < n; ++k) {
        s[k] = static_cast<double>(rng() % 20) / 20.0;  // deliberate ties
        t[k] = k == 0 ? ClassLabel::Los : k == 1 ? ClassLabel::Nlos
                                                 : (rng() % 2 ? ClassLabel::Nlos : ClassLabel::Los);
      }
      auc_err = std::max(auc_err, std::abs(roc_auc(s, t).auc - mann_whitney(s, t)));
    }
    const bool ok = label_bad == 0 && score_err <= 1e-9 && mrmr_bad == 0 && auc_err <= 1e-9;
    return Outcome{ok, fmtn("NB/WNB %zu/%zu label errors, max|post err|=%.1e; mRMR %zu/200 "
                            "disagreements; max|AUC-MW|=%.1e (tol 1e-9)",
                            label_bad, inputs, score_err, mrmr_bad, auc_err)};
  });

  criterion("6", "trend: accuracy vs imbalance", 300.0, [] {
    const auto cfg = default_config("sweep-ratio");
    const auto report = cmd_sweep_ratio(cfg);
    reports["sweep-ratio"] = report_to_json(report);
    bool ok = true;
    std::string detail;
    double prev_mean = 0.0, prev_sem = 0.0;
    for (std::size_t r = 0; r < cfg.ratios.size(); ++r) {
      const double ratio = cfg.ratios[r];
      const auto ft = summarize(report.group(ratio, kFtWnb).accuracies());
      const double nb = mean_of(report.group(ratio, kNb).accuracies());
      ok = ok && ft.mean >= nb;
      if (r > 0) {
        const double pooled = std::sqrt(prev_sem * prev_sem + ft.sem * ft.sem);
        ok = ok && ft.mean >= prev_mean - pooled;
      }
      detail += fmtn("r=%.1f FT %.4f (se %.4f) NB %.4f; ", ratio, ft.mean, ft.sem, nb);
      prev_mean = ft.mean;
      prev_sem = ft.sem;
    }
    return Outcome{ok, detail + "need FT non-decreasing within 1 pooled SE and FT >= NB"};
  });

  criterion("7", "trend: fine-tuning benefit", 300.0, [] {
    auto cfg = default_config("sweep-finetune");
    cfg.finetune_caps = {0, 40};
    cfg.ratio = 0.1;
    const auto report = cmd_sweep_finetune(cfg);
    reports["sweep-finetune"] = report_to_json(report);
    const auto& g0 = report.group(0, kFtWnb);
    const auto& g40 = report.group(40, kFtWnb);
    const double a0 = mean_of(g0.accuracies()), a40 = mean_of(g40.accuracies());
    const auto r0 = g0.nlos_recalls(), r40 = g40.nlos_recalls();
    std::size_t improved = 0;
    for (std::size_t k = 0; k < r0.size(); ++k) improved += r40[k] > r0[k];
    const bool ok = a40 >= a0 && improved >= 14;
    return Outcome{ok, fmtn("acc cap0 %.4f cap40 %.4f; NLoS recall %.3f -> %.3f, improved in "
                            "%zu/%zu seeds (need acc40 >= acc0 and >= 14/20)",
                            a0, a40, mean_of(r0), mean_of(r40), improved, r0.size())};
  });

  criterion("8", "cross-scenario studio->room", 300.0, [] {
    const auto cfg = default_config("cross-scenario");
    const auto report = cmd_cross_scenario(cfg);
    reports["cross-scenario"] = report_to_json(report);
    const auto same = summarize(report.group("same-scenario", kFtWnb).accuracies());
    const auto cross = summarize(report.group("cross-scenario", kFtWnb).accuracies());
    const bool ok = cross.median >= 0.90 && same.median > cross.median;
    return Outcome{ok, fmtn("median same %.4f cross %.4f (need cross >= 0.90 and same > cross)",
                            same.median, cross.median)};
  });

  criterion("9", "determinism of re-runs", 120.0, [] {
    auto cmp = default_config("compare");
    reports["compare"] = report_to_json(cmd_compare(cmp));
    auto trade = default_config("feature-tradeoff");
    reports["feature-tradeoff"] = report_to_json(cmd_feature_tradeoff(trade));
    std::size_t identical = 0;
    std::string bad;
    for (const auto& [name, first] : reports) {
      // Round-trip through text, as a report file on disk would be.
      const auto on_disk = Json::parse(first.dump());
      const auto rerun = report_to_json(run_experiment(config_from_json(on_disk)));
      if (strip_timing(on_disk).dump() == strip_timing(rerun).dump()) {
        ++identical;
      } else {
        bad += name + " ";
      }
    }
    return Outcome{identical == reports.size(),
                   fmtn("%zu/%zu reports reproduced bit-identically (timing stripped) %s",
                        identical, reports.size(), bad.c_str())};
  });

  // Module-level Monte-Carlo properties that sit next to the numbered
  // criteria: ordering on the default scenario at ratio 0.1.
  criterion("P1", "compare: FT-WNB median > NB", 300.0, [] {
    const auto& j = reports.at("compare");
    const auto cfg = config_from_json(j);
    (void)cfg;
    std::map<std::string, std::vector<double>> acc, rec;
    for (const auto& g : j["results"]) {
      for (const auto& r : g["runs"]) {
        acc[g["algorithm"]].push_back(r["metrics"]["accuracy"].get<double>());
        rec[g["algorithm"]].push_back(r["metrics"]["nlos_correct_rate"].get<double>());
      }
    }
    const double ft = summarize(acc[kFtWnb]).median, nb = summarize(acc[kNb]).median;
    return Outcome{ft > nb, fmtn("median FT-WNB %.4f NB %.4f", ft, nb)};
  });

  criterion("P2", "ordering FT>=WNB>=NB, recall", 300.0, [] {
    const auto& j = reports.at("compare");
    std::map<std::string, std::vector<double>> acc, rec;
    for (const auto& g : j["results"]) {
      for (const auto& r : g["runs"]) {
        acc[g["algorithm"]].push_back(r["metrics"]["accuracy"].get<double>());
        rec[g["algorithm"]].push_back(r["metrics"]["nlos_correct_rate"].get<double>());
      }
    }
    const double ft = summarize(acc[kFtWnb]).median;
    const double wnb = summarize(acc[kWnb]).median;
    const double nb = summarize(acc[kNb]).median;
    std::size_t at_least = 0;
    for (std::size_t k = 0; k < rec[kFtWnb].size(); ++k) at_least += rec[kFtWnb][k] >= rec[kNb][k];
    const bool ok = ft >= wnb && wnb >= nb && at_least >= 16;
    return Outcome{ok, fmtn("median FT-WNB %.4f WNB %.4f NB %.4f; FT recall >= NB in %zu/20 "
                            "(need ordering and >= 16/20)",
                            ft, wnb, nb, at_least)};
  });

  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}

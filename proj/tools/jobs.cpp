#include "jobs.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "padiclz/coleman.hpp"
#include "padiclz/error.hpp"
#include "padiclz/lattice.hpp"
#include "padiclz/lfun.hpp"
#include "padiclz/numtheory.hpp"
#include "padiclz/units.hpp"

namespace padiclz::cli {

namespace {

using nlohmann::json;

struct TaskOut {
    std::vector<Check> checks;
    json values = json::object();
    std::vector<PadicScalar> scalars;
    std::vector<long> counts;
    bool ok = true;
};

struct Task {
    std::string label;
    std::function<TaskOut()> fn;
};

struct Plan {
    std::vector<Task> tasks;
    // Cross-task checks; sees the task outputs in plan order.
    std::function<TaskOut(const std::vector<TaskOut>&)> finalize;
};

Check status_check(std::string name, Status st, std::string detail) {
    Check c;
    c.name = std::move(name);
    c.status = st;
    c.detail = std::move(detail);
    return c;
}

// ---------------------------------------------------------------------------

Plan plan_interp(const JobConfig& jc) {
    std::vector<DirichletCharacter> chars;
    std::set<std::string> seen;
    auto add = [&](const DirichletCharacter& c) {
        if (seen.insert(c.spec_string()).second) chars.push_back(c);
    };
    for (const auto& s : jc.characters) add(parse_character(s));
    for (long f = 3; f <= jc.conductor_max; ++f) {
        if (f % jc.p == 0) continue;
        const long n = DirichletCharacter::dual_group_size(f);
        for (long idx = 1; idx <= n; ++idx) {
            const DirichletCharacter c = DirichletCharacter::from_index(f, idx);
            if (c.is_primitive() && c.is_odd() && c.order() % jc.p != 0) add(c);
        }
    }
    Plan plan;
    for (const auto& c : chars) {
        const std::string spec = c.spec_string();
        plan.tasks.push_back({"interp/" + spec, [jc, c, spec] {
                                  TaskOut out;
                                  const int N = jc.precision;
                                  const KLSeries K = kl_series(c, jc.j, jc.p, jc.depth, jc.truncation, N);
                                  for (int n = 1; n <= jc.n_max; ++n) {
                                      const PadicScalar a = K.value_at_one_minus(n);
                                      const PadicScalar b = kl_interpolation_value(c, jc.j, jc.p, n, N);
                                      out.checks.push_back(residual_check(
                                          "interp/" + spec + "/n=" + std::to_string(n), residual_valuation(a, b), N - 4));
                                  }
                                  if (jc.j == 1) {
                                      // chi(p) = 1 is the exceptional case for chi * omega.
                                      const bool ez = c.exponent(jc.p % c.modulus()) == 0;
                                      const AugOrder a = aug_order(K.series);
                                      const int expect = ez ? 1 : 0;
                                      Status st;
                                      if (a.certified)
                                          st = a.order == expect ? Status::Pass : Status::Fail;
                                      else
                                          st = a.order > expect ? Status::Fail : Status::LowerBound;
                                      out.checks.push_back(status_check(
                                          "order/" + spec, st,
                                          "aug_order " + std::to_string(a.order) + (a.certified ? "" : " (uncertified)") +
                                              ", chi(p)" + (ez ? " = 1" : " != 1")));
                                  }
                                  return out;
                              }});
    }
    return plan;
}

Plan plan_coleman(const JobConfig& jc) {
    Plan plan;
    const int N = jc.precision;
    plan.tasks.push_back({"uniformizer", [jc, N] {
                              TowerParams tp;
                              tp.p = jc.p;
                              tp.levels = jc.levels;
                              tp.precision = N;
                              const ColemanSeries g = solve_coleman(build_cyclotomic_tower(tp));
                              const ContextPtr ctx = g.coeffs.at(0).context();
                              int res = N;
                              for (std::size_t i = 0; i < g.coeffs.size(); ++i)
                                  res = std::min(res, residual_valuation(g.coefficient(static_cast<int>(i)),
                                                                         PadicScalar::from_long(ctx, i == 1 ? 1 : 0)));
                              for (int r : g.level_residuals) res = std::min(res, r);
                              TaskOut out;
                              out.checks.push_back(residual_check("uniformizer/g=X", res, N - 3,
                                                                  std::to_string(g.coeffs.size()) + " coefficients"));
                              return out;
                          }});
    for (long u : jc.units)
        plan.tasks.push_back({"g(0)=u/u=" + std::to_string(u), [jc, N, u] {
                                  TowerParams tp;
                                  tp.kind = TowerKind::UnitFromRec;
                                  tp.p = jc.p;
                                  tp.levels = jc.levels;
                                  tp.precision = N;
                                  tp.u = u;
                                  const ColemanSeries g = solve_coleman(build_cyclotomic_tower(tp));
                                  const PadicScalar g0 = g.coefficient(0);
                                  TaskOut out;
                                  out.checks.push_back(residual_check(
                                      "g(0)=u/u=" + std::to_string(u),
                                      residual_valuation(g0, PadicScalar::from_long(g0.context(), u)), N - 4));
                                  return out;
                              }});
    plan.tasks.push_back({"constant", [jc, N] {
                              const ColConstantReport rep = col_constant_checks(jc.p, jc.levels, N);
                              TaskOut out;
                              for (std::size_t i = 0; i < rep.checks.size(); ++i) {
                                  const ConstantCheck& c = rep.checks[i];
                                  Check k = residual_check("constant/" + std::to_string(i + 1) + ":" + c.name,
                                                           c.residual, c.required, "lhs " + c.lhs.render());
                                  k.status = c.pass ? Status::Pass : Status::Fail;
                                  out.checks.push_back(k);
                              }
                              return out;
                          }});
    return plan;
}

Plan plan_linv(const JobConfig& jc) {
    Plan plan;
    const int N = jc.precision;
    plan.tasks.push_back({"route", [jc, N] {
                              const HeckeSetup s = make_setup(jc.disc, jc.p, jc.chi);
                              const PUnit u = stickelberger_punit(s);
                              const PadicScalar L = l_invariant_cyclotomic(s, u, N);
                              const ContextPtr ctx = L.context();
                              TaskOut out;
                              out.values["L"] = L.render();
                              out.values["L_valuation"] = L.valuation();
                              out.values["L_over_log_p(1+p)"] =
                                  (L / log_iwasawa(PadicScalar::from_long(ctx, 1 + jc.p))).render();
                              out.values["odd_disc"] = u.disc;
                              out.values["class_number"] = u.class_no;
                              out.values["u"] = u.construction;
                              out.values["e"] = exceptional_count(s);
                              if (jc.class_number)
                                  out.checks.push_back(status_check(
                                      "class-number", u.class_no == *jc.class_number ? Status::Pass : Status::Fail,
                                      "h = " + std::to_string(u.class_no) + " (config: " + jc.class_number_provenance + ")"));
                              const PUnit u2 = jacobi_route_available(s) ? stickelberger_punit_jacobi(s) : stickelberger_punit(s, 2);
                              out.checks.push_back(residual_check("route/independent-u",
                                                                  residual_valuation(L, l_invariant_cyclotomic(s, u2, N)),
                                                                  N - 5, u2.construction));
                              if (jc.generator) {
                                  const PUnit g = punit_from_generator(u.disc, jc.p, jc.generator->first, jc.generator->second);
                                  out.checks.push_back(residual_check(
                                      "route/generator-override", residual_valuation(L, l_invariant_cyclotomic(s, g, N)),
                                      N - 5, g.construction));
                              }
                              return out;
                          }});
    plan.tasks.push_back({"definitional", [jc, N] {
                              const HeckeSetup s = make_setup(jc.disc, jc.p, jc.chi);
                              const ChiUnitBasis basis = chi_unit_basis(s);
                              const PadicScalar L = l_invariant_cyclotomic(s, stickelberger_punit(s), N);
                              const ContextPtr ctx = L.context();
                              TaskOut out;
                              const auto g = l_invariant_definitional(s, basis, GammaWeights::unramified_outside_p(), N);
                              out.checks.push_back(residual_check(
                                  "definitional/gamma-p", residual_valuation(g.value.to_context(ctx), PadicScalar::one(ctx)), N,
                                  "expects exactly 1"));
                              const auto z = l_invariant_definitional(s, basis, GammaWeights::split_completely(), N);
                              out.checks.push_back(residual_check(
                                  "definitional/split", residual_valuation(z.value.to_context(ctx), PadicScalar::zero(ctx)), N,
                                  "expects exactly 0"));
                              const auto c = l_invariant_definitional(s, basis, GammaWeights::cyclotomic(), N);
                              out.checks.push_back(residual_check("definitional/cyclotomic",
                                                                  residual_valuation(c.value.to_context(ctx), L), N - 5,
                                                                  "against -log_p(u)/ord(u)"));
                              out.values["leopoldt_det_valuation"] = c.ord_det.valuation();
                              return out;
                          }});
    return plan;
}

Plan plan_exceptional(const JobConfig& jc) {
    Plan plan;
    plan.tasks.push_back({"order-vs-e", [jc] {
                              const HeckeSetup s = make_setup(jc.disc, jc.p, jc.chi);
                              const int e = exceptional_count(s);
                              const KatzCyclotomic K = katz_cyclotomic(s, jc.depth, jc.truncation, jc.precision);
                              const AugOrder a = aug_order(K.series);
                              Status st;
                              if (a.certified)
                                  st = a.order == e ? Status::Pass : Status::Fail;
                              else
                                  st = a.order > e ? Status::Fail : Status::LowerBound;
                              TaskOut out;
                              out.values["aug_order"] = a.order;
                              out.values["certified"] = a.certified;
                              out.values["e"] = e;
                              out.checks.push_back(status_check("order-vs-e", st,
                                                                "aug_order " + std::to_string(a.order) +
                                                                    (a.certified ? " certified" : " lower bound") +
                                                                    ", e = " + std::to_string(e)));
                              return out;
                          }});
    return plan;
}

Plan plan_leading(const JobConfig& jc) {
    Plan plan;
    for (const auto& sp : jc.setups)
        plan.tasks.push_back({"order/" + sp.label(), [jc, sp] {
                                  const HeckeSetup s = make_setup(sp.disc, sp.p, sp.chi);
                                  const LeadingTermRatio r = leading_term_ratio(s, jc.depth, jc.truncation, jc.precision);
                                  TaskOut out;
                                  out.checks.push_back(status_check("order/" + sp.label(),
                                                                    r.katz.certified ? Status::Pass : Status::LowerBound,
                                                                    "Katz leading term of order 1"));
                                  out.values["ratio/" + sp.label()] = r.ratio.render();
                                  out.values["L/" + sp.label()] = r.l_invariant.render();
                                  out.scalars.push_back(r.ratio);
                                  return out;
                              }});
    const auto setups = jc.setups;
    const int N = jc.precision;
    plan.finalize = [setups, N](const std::vector<TaskOut>& outs) {
        TaskOut out;
        std::vector<std::pair<long, PadicScalar>> ratios;
        for (std::size_t i = 0; i < outs.size(); ++i)
            if (outs[i].ok && !outs[i].scalars.empty()) ratios.emplace_back(setups[i].p, outs[i].scalars[0]);
        if (ratios.size() < outs.size()) {
            out.checks.push_back(status_check("constancy", Status::Error, "some setups did not produce a ratio"));
            return out;
        }
        int same = N;
        bool any_pair = false;
        for (std::size_t a = 0; a < ratios.size(); ++a)
            for (std::size_t b = a + 1; b < ratios.size(); ++b)
                if (ratios[a].first == ratios[b].first) {
                    any_pair = true;
                    same = std::min(same, residual_valuation(ratios[a].second, ratios[b].second));
                }
        if (any_pair) out.checks.push_back(residual_check("constancy/same-prime", same, N - 6));
        // Across primes the only meaningful comparison is of a rational constant.
        std::optional<mpq_class> c;
        bool consistent = true;
        int res = N;
        for (const auto& [p, r] : ratios) {
            mpq_class q;
            if (!rational_reconstruct(r, q) || (c && *c != q)) {
                consistent = false;
                break;
            }
            c = q;
            res = std::min(res, residual_valuation(r, PadicScalar::from_rational(r.context(), q)));
        }
        if (consistent) {
            out.checks.push_back(residual_check("constancy/rational", res, N - 6, "c = " + c->get_str()));
            out.values["constant"] = c->get_str();
        } else {
            out.checks.push_back(status_check("constancy/rational", Status::Fail, "ratios do not reconstruct to one rational"));
        }
        return out;
    };
    return plan;
}

Plan plan_lattice(const JobConfig& jc) {
    const std::vector<FiniteRing> rings = small_rings(jc.max_ring);
    std::mt19937_64 rng(jc.seed);
    std::vector<PresentedModule> mods;
    for (int i = 0; i < jc.instances; ++i) {
        const FiniteRing& R = rings[static_cast<std::size_t>(i) % rings.size()];
        const int n1 = 1 + static_cast<int>(rng() % jc.max_rank);
        const int n2 = 1 + static_cast<int>(rng() % jc.max_rank);
        mods.push_back(random_module(R, n1, n2, rng));
    }
    std::vector<FreeInstance> frees;
    for (int i = 0; i < jc.free_instances; ++i) {
        const FiniteRing& R = rings[static_cast<std::size_t>(i) % rings.size()];
        const int rank = 1 + static_cast<int>(rng() % jc.max_rank);
        const int extra = static_cast<int>(rng() % (jc.max_rank - rank + 1));
        frees.push_back(random_free_module(R, rank, extra, rng));
    }
    Plan plan;
    constexpr std::size_t kChunk = 20;
    // counts: comparisons, mismatches, non-injective, non-surjective, base-change checked, base-change failures
    for (std::size_t start = 0; start < mods.size(); start += kChunk) {
        std::vector<PresentedModule> chunk(mods.begin() + start, mods.begin() + std::min(mods.size(), start + kChunk));
        plan.tasks.push_back({"modules", [chunk] {
                                  TaskOut out;
                                  out.counts.assign(6, 0);
                                  for (const auto& M : chunk) {
                                      const long pa = M.R.coefficient_modulus();
                                      long q = 2;
                                      while (pa % q != 0) ++q;
                                      for (int r = 1; r <= M.n1; ++r) {
                                          const WedgeSubmodule B = bidual(M, r);
                                          const DoubleDual D = brute_force_double_dual(M, r);
                                          ++out.counts[0];
                                          if (B.elements != D.image.elements) ++out.counts[1];
                                          if (!D.injective) ++out.counts[2];
                                          if (!D.restriction_surjective) ++out.counts[3];
                                          if (q == pa) continue;
                                          const PresentedModule Mq = M.base_change(q);
                                          const WedgeSubmodule Bq = bidual(Mq, r);
                                          ++out.counts[4];
                                          for (const auto& x : B.elements) {
                                              ModElem y(x.size());
                                              for (std::size_t i = 0; i < x.size(); ++i) y[i] = M.R.reduce_to(Mq.R, x[i]);
                                              if (!std::binary_search(Bq.elements.begin(), Bq.elements.end(), y)) {
                                                  ++out.counts[5];
                                                  break;
                                              }
                                          }
                                      }
                                  }
                                  return out;
                              }});
    }
    const std::size_t module_tasks = plan.tasks.size();
    for (std::size_t start = 0; start < frees.size(); start += kChunk) {
        std::vector<FreeInstance> chunk(frees.begin() + start, frees.begin() + std::min(frees.size(), start + kChunk));
        plan.tasks.push_back({"free", [chunk] {
                                  TaskOut out;
                                  out.counts.assign(2, 0);
                                  for (const auto& F : chunk) {
                                      const FiniteRing& R = F.module.R;
                                      const int r = static_cast<int>(F.basis.size());
                                      const WedgeSubmodule B = bidual(F.module, r);
                                      const ModElem w = wedge_of(R, F.module.n1, F.basis);
                                      ++out.counts[0];
                                      if (B.elements != span(R, {w}, w.size()) ||
                                          static_cast<int>(B.elements.size()) != R.size())
                                          ++out.counts[1];
                                  }
                                  return out;
                              }});
    }
    json ring_names = json::array();
    for (const auto& R : rings) ring_names.push_back(R.describe());
    const int n_mod = jc.instances, n_free = jc.free_instances;
    plan.finalize = [module_tasks, ring_names, n_mod, n_free](const std::vector<TaskOut>& outs) {
        TaskOut out;
        long c[6] = {0, 0, 0, 0, 0, 0}, f[2] = {0, 0};
        for (std::size_t i = 0; i < outs.size(); ++i) {
            if (!outs[i].ok) {
                out.checks.push_back(status_check("enumeration", Status::Error, "a chunk raised an error"));
                return out;
            }
            for (std::size_t k = 0; k < outs[i].counts.size(); ++k) (i < module_tasks ? c[k] : f[k]) += outs[i].counts[k];
        }
        auto flag = [](long bad) { return bad == 0 ? Status::Pass : Status::Fail; };
        const std::string tail = " of " + std::to_string(c[0]) + " (module, r) pairs from " + std::to_string(n_mod) + " modules";
        out.checks.push_back(status_check("bidual-vs-double-dual", flag(c[1]), std::to_string(c[1]) + " mismatches" + tail));
        out.checks.push_back(status_check("double-dual-injective", flag(c[2]), std::to_string(c[2]) + " failures" + tail));
        out.checks.push_back(status_check("restriction-surjective", flag(c[3]), std::to_string(c[3]) + " failures" + tail));
        out.checks.push_back(status_check("base-change", flag(c[5]),
                                          std::to_string(c[5]) + " failures of " + std::to_string(c[4]) + " reductions"));
        out.checks.push_back(status_check("free-collapse", flag(f[1]),
                                          std::to_string(f[1]) + " failures of " + std::to_string(n_free) + " free modules"));
        out.values["rings"] = ring_names;
        out.values["comparisons"] = c[0];
        return out;
    };
    return plan;
}

Plan plan_job(const JobConfig& jc) {
    if (jc.kind == "interp-check") return plan_interp(jc);
    if (jc.kind == "coleman-check") return plan_coleman(jc);
    if (jc.kind == "linv") return plan_linv(jc);
    if (jc.kind == "exceptional-zero") return plan_exceptional(jc);
    if (jc.kind == "leading-term") return plan_leading(jc);
    if (jc.kind == "lattice-suite") return plan_lattice(jc);
    throw ConfigError("unknown kind '" + jc.kind + "'");
}

TaskOut run_task(const Task& t, double& ms) {
    const auto t0 = std::chrono::steady_clock::now();
    TaskOut out;
    try {
        out = t.fn();
    } catch (const std::exception& e) {
        out = TaskOut{};
        out.ok = false;
        out.checks.push_back(status_check(t.label, Status::Error, e.what()));
    }
    ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (auto& c : out.checks) c.wall_ms = ms;
    return out;
}

}  // namespace

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PADIC_LZERO_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
        else throw ConfigError("PADIC_LZERO_THREADS must be a positive integer");
    }
    return n;
}

std::vector<JobReport> run_jobs(const RunConfig& rc, std::size_t workers) {
    std::vector<Plan> plans;
    std::vector<std::pair<std::size_t, std::size_t>> index;
    for (std::size_t j = 0; j < rc.jobs.size(); ++j) {
        plans.push_back(plan_job(rc.jobs[j]));
        for (std::size_t t = 0; t < plans.back().tasks.size(); ++t) index.emplace_back(j, t);
    }
    std::vector<std::vector<TaskOut>> outs(plans.size());
    std::vector<std::vector<double>> times(plans.size());
    for (std::size_t j = 0; j < plans.size(); ++j) {
        outs[j].resize(plans[j].tasks.size());
        times[j].resize(plans[j].tasks.size());
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < index.size(); i = next++) {
            const auto [j, t] = index[i];
            outs[j][t] = run_task(plans[j].tasks[t], times[j][t]);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < std::min(workers, index.size()); ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<JobReport> reports;
    for (std::size_t j = 0; j < plans.size(); ++j) {
        JobReport r;
        r.echo = rc.jobs[j].echo();
        std::vector<TaskOut> all = outs[j];
        for (double ms : times[j]) r.wall_ms += ms;
        if (plans[j].finalize) {
            const Task fin{"finalize", [&] { return plans[j].finalize(outs[j]); }};
            double ms = 0;
            all.push_back(run_task(fin, ms));
            r.wall_ms += ms;
        }
        for (const auto& o : all) {
            r.checks.insert(r.checks.end(), o.checks.begin(), o.checks.end());
            for (const auto& [k, v] : o.values.items()) r.values[k] = v;
        }
        std::stable_sort(r.checks.begin(), r.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace padiclz::cli

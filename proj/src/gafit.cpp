#include "sfwm/gafit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include <gsl/gsl_multimin.h>

#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/phasematch.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exact wavenumbers with the scalar index memoized per (l, m, omega);
/// one fitness evaluation revisits the same few frequencies many times.
class WavenumberCache {
public:
    explicit WavenumberCache(const FiberParams& fiber) : fiber_(fiber) {}

    double k_per_m(const LPMode& mode, double omega)
    {
        for (const auto& e : entries_) {
            if (e.l == mode.l && e.m == mode.m && e.omega == omega) return finish(mode, e.n0, omega);
        }
        const double n0 = solve_lp_scalar_index(fiber_, mode.l, mode.m, wavelength_nm(omega));
        entries_.push_back({mode.l, mode.m, omega, n0});
        return finish(mode, n0, omega);
    }

    double mismatch(const ProcessSpec& p, double wp, double ws, double wi)
    {
        return k_per_m(p.pump1, wp) + k_per_m(p.pump2, ws + wi - wp) - k_per_m(p.signal, ws) - k_per_m(p.idler, wi);
    }

private:
    struct Entry {
        int l;
        int m;
        double omega;
        double n0;
    };

    double finish(const LPMode& mode, double n0, double omega) const
    {
        return unfold_index(n0, mode, fiber_) * omega / kSpeedOfLight;
    }

    FiberParams fiber_;
    std::vector<Entry> entries_;
};

/// Signed mismatch of one observation under one process, NaN if infeasible.
double observation_mismatch(WavenumberCache& cache, const PeakObservation& obs, const ProcessSpec& p)
{
    try {
        return cache.mismatch(p, angular_frequency(obs.pump_nm), angular_frequency(obs.signal_nm),
                              angular_frequency(obs.idler_nm));
    } catch (const ModeNotGuided&) {
        return std::numeric_limits<double>::quiet_NaN();
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::vector<std::string> labels_of(std::span<const PeakObservation> observations)
{
    std::vector<std::string> labels;
    for (const auto& o : observations) {
        if (std::find(labels.begin(), labels.end(), o.label) == labels.end()) labels.push_back(o.label);
    }
    std::sort(labels.begin(), labels.end());
    return labels;
}

bool sort_key_less(double fa, const Genome& ga, double fb, const Genome& gb)
{
    if (fa != fb) return fa < fb;
    return ga < gb;
}

struct PolishContext {
    Genome base;
    const GAConfig* config;
    std::vector<std::size_t> free;  // genes with a non-empty interval
    const std::function<double(const Genome&)>* evaluate;
    std::size_t calls = 0;
};

/// Maps scaled simplex coordinates to a clipped genome; the second member is
/// the scaled distance by which the point lies outside the box.
std::pair<Genome, double> decode(const PolishContext& c, const gsl_vector* x)
{
    Genome g = c.base;
    double outside = 0.0;
    for (std::size_t j = 0; j < c.free.size(); ++j) {
        const std::size_t k = c.free[j];
        const auto& b = c.config->bounds[k];
        const double value = b.lo + gsl_vector_get(x, j) * b.width();
        g[k] = std::clamp(value, b.lo, b.hi);
        outside += std::abs(value - g[k]) / b.width();
    }
    return {g, outside};
}

double polish_objective(const gsl_vector* x, void* params)
{
    auto& c = *static_cast<PolishContext*>(params);
    ++c.calls;
    const auto [g, outside] = decode(c, x);
    const double f = (*c.evaluate)(g);
    return std::isfinite(f) ? f * (1.0 + outside) + 1e6 * outside : GSL_POSINF;
}

/// Nelder-Mead refinement in coordinates scaled to the bound widths, with
/// restarts from shrinking simplices. Pinned genes stay fixed.
std::pair<Genome, double> polish(const Genome& start, double start_fitness, const GAConfig& config,
                                 const std::function<double(const Genome&)>& evaluate)
{
    PolishContext ctx{start, &config, {}, &evaluate};
    for (std::size_t k = 0; k < 4; ++k) {
        if (config.bounds[k].width() > 0.0) ctx.free.push_back(k);
    }
    if (ctx.free.empty() || config.polish_evaluations == 0 || !std::isfinite(start_fitness)) {
        return {start, start_fitness};
    }
    const std::size_t n = ctx.free.size();
    gsl_multimin_function fn{&polish_objective, n, &ctx};
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& b = config.bounds[ctx.free[j]];
        gsl_vector_set(x, j, (start[ctx.free[j]] - b.lo) / b.width());
    }
    Genome best = start;
    double best_fitness = start_fitness;
    for (double size : {1e-2, 1e-3, 1e-4}) {
        gsl_vector_set_all(step, size);
        gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
        gsl_multimin_fminimizer_set(s, &fn, x, step);
        while (ctx.calls < config.polish_evaluations) {
            if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
        }
        gsl_vector_memcpy(x, gsl_multimin_fminimizer_x(s));
        gsl_multimin_fminimizer_free(s);
        const Genome g = decode(ctx, x).first;
        const double f = evaluate(g);
        if (f < best_fitness) {
            best = g;
            best_fitness = f;
        }
        if (ctx.calls >= config.polish_evaluations) break;
    }
    gsl_vector_free(step);
    gsl_vector_free(x);
    return {best, best_fitness};
}

}  // namespace

double PeakObservation::energy_residual() const noexcept
{
    return std::abs(1.0 / signal_nm + 1.0 / idler_nm - 2.0 / pump_nm);
}

double PeakDeviation::max_abs_nm() const noexcept
{
    return std::max(std::abs(signal_predicted_nm - signal_observed_nm), std::abs(idler_predicted_nm - idler_observed_nm));
}

void GAConfig::validate() const
{
    if (population_size < 4) throw DomainError("population size must be at least 4");
    if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) throw DomainError("elite fraction must lie in (0, 1)");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw DomainError("mutation rate must lie in [0, 1]");
    if (tournament_size < 1) throw DomainError("tournament size must be at least 1");
    for (const auto& b : bounds) {
        if (!(b.lo <= b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw DomainError("parameter bounds must be finite, non-empty intervals");
        }
    }
    if (!(mutation_decay > 0.0 && mutation_decay <= 1.0)) throw DomainError("mutation decay must lie in (0, 1]");
    for (double s : mutation_scale) {
        if (!(s >= 0.0)) throw DomainError("mutation scales must be non-negative");
    }
    if (!(length_m > 0.0)) throw DomainError("fiber length must be positive");
}

FiberParams fiber_from_genome(const Genome& g, double length_m, CladdingMaterial cladding)
{
    return FiberParams{g[kCoreRadius], g[kNumericalAperture], g[kDelta], g[kDeltaP], length_m, cladding};
}

Genome genome_from_fiber(const FiberParams& f)
{
    return {f.core_radius_um, f.numerical_aperture, f.delta, f.delta_p};
}

double fitness(const FiberParams& params, std::span<const PeakObservation> observations, const Assignment& assignment,
               FitnessVariant variant)
{
    WavenumberCache cache(params);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (const auto& obs : observations) {
        const auto it = assignment.find(obs.label);
        if (it == assignment.end()) return kInf;
        const double dk = observation_mismatch(cache, obs, it->second);
        if (!std::isfinite(dk)) return kInf;
        sum += dk;
        abs_sum += std::abs(dk);
    }
    return variant == FitnessVariant::sum_of_abs ? abs_sum : std::abs(sum);
}

std::vector<ProcessSpec> compatible_processes(std::span<const PeakObservation> observations, const std::string& label,
                                              std::span<const ProcessSpec> viable_set)
{
    std::vector<ProcessSpec> out;
    for (const auto& p : viable_set) {
        bool ok = true;
        for (const auto& o : observations) {
            if (o.label != label) continue;
            if (o.signal_mode && !(*o.signal_mode == p.signal)) ok = false;
            if (o.idler_mode && !(*o.idler_mode == p.idler)) ok = false;
        }
        if (ok) out.push_back(p);
    }
    return out;
}

AssignmentResult assign_processes(const FiberParams& params, std::span<const PeakObservation> observations,
                                  std::span<const ProcessSpec> viable_set, bool use_mode_constraints,
                                  FitnessVariant variant)
{
    if (viable_set.empty()) {
        throw AssignmentError("the viable process set is empty");
    }
    const auto labels = labels_of(observations);
    WavenumberCache cache(params);

    struct Candidate {
        ProcessSpec process;
        double signed_sum;
        double abs_sum;
    };
    std::vector<std::vector<Candidate>> table;
    AssignmentResult result;
    for (const auto& label : labels) {
        std::vector<ProcessSpec> candidates =
            use_mode_constraints ? compatible_processes(observations, label, viable_set)
                                 : std::vector<ProcessSpec>(viable_set.begin(), viable_set.end());
        if (candidates.empty()) {
            throw AssignmentError("no viable process is compatible with peak pair '" + label + "'");
        }
        result.candidates_tested[label] = candidates.size();
        std::vector<Candidate> row;
        for (const auto& p : candidates) {
            double s = 0.0;
            double a = 0.0;
            for (const auto& o : observations) {
                if (o.label != label) continue;
                const double dk = observation_mismatch(cache, o, p);
                if (!std::isfinite(dk)) {
                    s = a = kInf;
                    break;
                }
                s += dk;
                a += std::abs(dk);
            }
            row.push_back({p, s, a});
        }
        table.push_back(std::move(row));
    }

    if (variant == FitnessVariant::sum_of_abs) {
        // Separable: the best combination picks the best process per label.
        double total = 0.0;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            const auto best = std::min_element(table[k].begin(), table[k].end(),
                                               [](const Candidate& a, const Candidate& b) { return a.abs_sum < b.abs_sum; });
            result.assignment[labels[k]] = best->process;
            total += best->abs_sum;
        }
        result.fitness_per_m = total;
        return result;
    }

    double combinations = 1.0;
    for (const auto& row : table) combinations *= static_cast<double>(row.size());
    if (combinations > 1e7) {
        throw DomainError("too many process combinations for the abs_of_sum fitness");
    }
    std::vector<std::size_t> index(labels.size(), 0);
    std::vector<std::size_t> best_index = index;
    double best = kInf;
    while (true) {
        double s = 0.0;
        for (std::size_t k = 0; k < labels.size(); ++k) s += table[k][index[k]].signed_sum;
        const double value = std::isfinite(s) ? std::abs(s) : kInf;
        if (value < best) {
            best = value;
            best_index = index;
        }
        std::size_t k = 0;
        while (k < labels.size() && ++index[k] == table[k].size()) index[k++] = 0;
        if (k == labels.size()) break;
    }
    for (std::size_t k = 0; k < labels.size(); ++k) result.assignment[labels[k]] = table[k][best_index[k]].process;
    result.fitness_per_m = best;
    return result;
}

std::optional<std::array<double, 2>> predict_peak(const FiberParams& fiber, const ProcessSpec& process, double pump_nm,
                                                  double signal_guess_nm, double window_nm)
{
    const double wp = angular_frequency(pump_nm);
    WavenumberCache cache(fiber);
    const auto f = [&](double ws) {
        try {
            return cache.mismatch(process, wp, ws, 2.0 * wp - ws);
        } catch (const ModeNotGuided&) {
            return std::numeric_limits<double>::quiet_NaN();
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    constexpr int kScan = 64;
    std::optional<std::array<double, 2>> best;
    double best_distance = kInf;
    double prev_w = 0.0;
    double prev_f = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j <= kScan; ++j) {
        const double lambda = signal_guess_nm - window_nm + 2.0 * window_nm * j / kScan;
        if (!(std::abs(lambda - pump_nm) > 1e-9)) {
            prev_f = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double ws = angular_frequency(lambda);
        const double fv = f(ws);
        if (std::isfinite(fv) && std::isfinite(prev_f) && ((fv < 0.0) != (prev_f < 0.0) || fv == 0.0)) {
            double a = prev_w;
            double b = ws;
            double fa = prev_f;
            for (int iter = 0; iter < 200; ++iter) {
                const double m = 0.5 * (a + b);
                if (m == a || m == b) break;
                const double fm = f(m);
                if (!std::isfinite(fm)) break;
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            const double root = 0.5 * (a + b);
            const double ls = wavelength_nm(root);
            if (std::abs(ls - signal_guess_nm) < best_distance) {
                best_distance = std::abs(ls - signal_guess_nm);
                best = std::array<double, 2>{ls, wavelength_nm(2.0 * wp - root)};
            }
        }
        prev_w = ws;
        prev_f = fv;
    }
    return best;
}

std::vector<PeakDeviation> peak_deviations(const FiberParams& fiber, std::span<const PeakObservation> observations,
                                           const Assignment& assignment)
{
    std::vector<PeakDeviation> out;
    for (const auto& o : observations) {
        PeakDeviation d;
        d.label = o.label;
        d.pump_nm = o.pump_nm;
        d.signal_observed_nm = o.signal_nm;
        d.idler_observed_nm = o.idler_nm;
        d.signal_predicted_nm = kInf;
        d.idler_predicted_nm = kInf;
        if (const auto it = assignment.find(o.label); it != assignment.end()) {
            if (const auto peak = predict_peak(fiber, it->second, o.pump_nm, o.signal_nm)) {
                d.signal_predicted_nm = (*peak)[0];
                d.idler_predicted_nm = (*peak)[1];
            }
        }
        out.push_back(d);
    }
    return out;
}

GAResult ga_run(std::span<const PeakObservation> observations, const GAConfig& config, const GAObserver& observer)
{
    config.validate();
    if (observations.empty()) {
        throw DomainError("at least one observation is required");
    }
    const std::vector<ProcessSpec> candidates =
        config.candidates.empty() ? six_mode_viable_xx_yy() : config.candidates;
    // Surface assignment errors (empty set, incompatible modes) before evolving.
    {
        const Genome mid{0.5 * (config.bounds[0].lo + config.bounds[0].hi), 0.5 * (config.bounds[1].lo + config.bounds[1].hi),
                         0.5 * (config.bounds[2].lo + config.bounds[2].hi), 0.5 * (config.bounds[3].lo + config.bounds[3].hi)};
        assign_processes(fiber_from_genome(mid, config.length_m, config.cladding), observations, candidates,
                         config.use_mode_constraints, config.fitness_variant);
    }

    const std::size_t pop = config.population_size;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto evaluate_one = [&](const Genome& g) {
        try {
            const double f = assign_processes(fiber_from_genome(g, config.length_m, config.cladding), observations,
                                              candidates, config.use_mode_constraints, config.fitness_variant)
                                 .fitness_per_m;
            return std::isnan(f) ? kInf : f;
        } catch (const DomainError&) {
            return kInf;
        }
    };
    const auto evaluate = [&](const std::vector<Genome>& genomes, std::vector<double>& fit, std::size_t first) {
        const std::size_t n = genomes.size() - first;
        const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, n));
        if (workers == 1) {
            for (std::size_t i = first; i < genomes.size(); ++i) fit[i] = evaluate_one(genomes[i]);
            return;
        }
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                for (std::size_t i = first + w; i < genomes.size(); i += workers) fit[i] = evaluate_one(genomes[i]);
            });
        }
        for (auto& t : threads) t.join();
    };
    const auto clip = [&](Genome& g) {
        for (std::size_t k = 0; k < 4; ++k) g[k] = std::clamp(g[k], config.bounds[k].lo, config.bounds[k].hi);
    };

    std::vector<Genome> genomes(pop);
    std::vector<double> fit(pop, kInf);
    for (auto& g : genomes) {
        for (std::size_t k = 0; k < 4; ++k) g[k] = config.bounds[k].lo + unit(rng) * config.bounds[k].width();
        clip(g);
    }
    evaluate(genomes, fit, 0);

    const auto sort_population = [&] {
        std::vector<std::size_t> order(pop);
        for (std::size_t i = 0; i < pop; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return sort_key_less(fit[a], genomes[a], fit[b], genomes[b]); });
        std::vector<Genome> g2(pop);
        std::vector<double> f2(pop);
        for (std::size_t i = 0; i < pop; ++i) {
            g2[i] = genomes[order[i]];
            f2[i] = fit[order[i]];
        }
        genomes.swap(g2);
        fit.swap(f2);
    };

    GAResult result;
    sort_population();
    result.best_fitness_history.push_back(fit[0]);
    if (observer) observer(0, genomes, fit);

    const std::size_t elite = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(config.elite_fraction * static_cast<double>(pop))), 1, pop - 1);
    const auto tournament = [&]() -> const Genome& {
        std::size_t best = pop;
        for (std::size_t t = 0; t < config.tournament_size; ++t) {
            const auto pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(pop)) % pop;
            if (best == pop || pick < best) best = pick;  // population is sorted
        }
        return genomes[best];
    };

    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        const double progress =
            config.generations > 1 ? static_cast<double>(gen - 1) / static_cast<double>(config.generations - 1) : 0.0;
        const double sigma_factor = std::pow(config.mutation_decay, progress);
        std::vector<Genome> next(genomes.begin(), genomes.begin() + static_cast<std::ptrdiff_t>(elite));
        std::vector<double> next_fit(fit.begin(), fit.begin() + static_cast<std::ptrdiff_t>(elite));
        next.reserve(pop);
        while (next.size() < pop) {
            const Genome& a = tournament();
            const Genome& b = tournament();
            Genome child;
            // Line crossover: one blend factor for all genes keeps children on
            // the chord between parents, which follows the narrow valleys of
            // this problem. It may step 25% beyond either parent.
            const double alpha = -0.25 + 1.5 * unit(rng);
            for (std::size_t k = 0; k < 4; ++k) child[k] = a[k] + alpha * (b[k] - a[k]);
            for (std::size_t k = 0; k < 4; ++k) {
                if (unit(rng) < config.mutation_rate) {
                    child[k] += normal(rng) * sigma_factor * config.mutation_scale[k] * config.bounds[k].width();
                }
            }
            clip(child);
            next.push_back(child);
        }
        next_fit.resize(pop, kInf);
        genomes.swap(next);
        fit.swap(next_fit);
        evaluate(genomes, fit, elite);
        sort_population();
        result.best_fitness_history.push_back(fit[0]);
        if (observer) observer(gen, genomes, fit);
    }

    {
        const std::function<double(const Genome&)> eval = evaluate_one;
        auto [g, f] = polish(genomes[0], fit[0], config, eval);
        if (f < fit[0]) {
            genomes.insert(genomes.begin(), g);
            fit.insert(fit.begin(), f);
            genomes.pop_back();
            fit.pop_back();
        }
    }

    // Merge near-duplicates, keeping the fitter representative.
    const auto close = [&](const Genome& a, const Genome& b) {
        for (std::size_t k = 0; k < 4; ++k) {
            const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
            if (std::abs(a[k] - b[k]) > config.merge_tolerance * scale) return false;
        }
        return true;
    };
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < pop; ++i) {
        if (std::none_of(kept.begin(), kept.end(), [&](std::size_t j) { return close(genomes[i], genomes[j]); })) {
            kept.push_back(i);
        }
    }
    for (std::size_t r = 0; r < kept.size(); ++r) {
        const Genome& g = genomes[kept[r]];
        FitSolution s;
        s.params = fiber_from_genome(g, config.length_m, config.cladding);
        s.fitness_per_m = fit[kept[r]];
        s.max_peak_deviation_nm = std::numeric_limits<double>::quiet_NaN();
        if (r < config.report_count && std::isfinite(s.fitness_per_m)) {
            s.assignment = assign_processes(s.params, observations, candidates, config.use_mode_constraints,
                                            config.fitness_variant)
                               .assignment;
            s.deviations = peak_deviations(s.params, observations, s.assignment);
            double worst = 0.0;
            for (const auto& d : s.deviations) worst = std::max(worst, d.max_abs_nm());
            s.max_peak_deviation_nm = worst;
        }
        result.ranked.push_back(std::move(s));
    }
    return result;
}

std::vector<FitSolution> solution_family(std::span<const PeakObservation> observations, std::span<const double> r0_grid_um,
                                         const GAConfig& config)
{
    std::vector<FitSolution> family;
    for (std::size_t i = 0; i < r0_grid_um.size(); ++i) {
        GAConfig c = config;
        c.bounds[kCoreRadius] = {r0_grid_um[i], r0_grid_um[i]};
        c.seed = config.seed + i;
        c.report_count = 1;
        GAResult r = ga_run(observations, c);
        family.push_back(std::move(r.ranked.front()));
    }
    return family;
}

std::vector<PeakObservation> simulate_peaks(const FiberParams& fiber, const Assignment& processes,
                                            std::span<const double> pump_nm, const SimulationOptions& options)
{
    std::vector<PeakObservation> out;
    for (const double lp : pump_nm) {
        for (const auto& [label, process] : processes) {
            const auto roots = pm_roots(process, fiber, lp);
            const PMPoint* best = nullptr;
            for (const auto& r : roots) {
                if (r.signal_is_red() && (!best || r.signal_nm < best->signal_nm)) best = &r;
            }
            if (!best) {
                throw NumericalError("process " + process.label() + " has no phasematched pair at pump " +
                                     std::to_string(lp) + " nm");
            }
            PeakObservation o;
            o.pump_nm = lp;
            o.label = label;
            o.signal_nm = best->signal_nm;
            o.idler_nm = best->idler_nm;
            if (options.record_modes) {
                o.signal_mode = process.signal;
                o.idler_mode = process.idler;
            }
            o.signal_width_nm = options.signal_width_nm;
            o.idler_width_nm = options.idler_width_nm;
            o.pump_bandwidth_nm = options.pump_bandwidth_nm;
            out.push_back(o);
        }
    }
    return out;
}

std::size_t FeasibilityMap::count(Feasibility f) const
{
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), f));
}

FeasibilityMap feasibility_map(const ProcessSpec& process, double pump_nm, double signal_nm, double idler_nm,
                               const GridAxis& r0_um, const GridAxis& na, double delta, double delta_p, double length_m,
                               CladdingMaterial cladding)
{
    if (r0_um.n == 0 || na.n == 0) throw DomainError("feasibility grid axes must be non-empty");
    FeasibilityMap map;
    map.r0_um = r0_um;
    map.na = na;
    const double wp = angular_frequency(pump_nm);
    const double ws = angular_frequency(signal_nm);
    const double wi = angular_frequency(idler_nm);
    const double wp2 = ws + wi - wp;
    const std::pair<const LPMode*, double> waves[4] = {
        {&process.pump1, wp}, {&process.pump2, wp2}, {&process.signal, ws}, {&process.idler, wi}};
    for (std::size_t ir = 0; ir < r0_um.n; ++ir) {
        for (std::size_t ia = 0; ia < na.n; ++ia) {
            const FiberParams fiber{r0_um.at(ir), na.at(ia), delta, delta_p, length_m, cladding};
            bool supported = true;
            for (const auto& [mode, omega] : waves) {
                if (!(v_number(fiber, wavelength_nm(omega)) > lp_cutoff_v(mode->l, mode->m))) supported = false;
            }
            Feasibility cell = Feasibility::unsupported;
            double value = std::numeric_limits<double>::quiet_NaN();
            if (supported) {
                try {
                    WavenumberCache cache(fiber);
                    value = std::abs(length_m * cache.mismatch(process, wp, ws, wi));
                    cell = value <= 2.0 * kPi ? Feasibility::phasematched : Feasibility::mismatched;
                } catch (const ModeNotGuided&) {
                    cell = Feasibility::unsupported;
                }
            }
            map.cells.push_back(cell);
            map.l_delta_k.push_back(value);
        }
    }
    return map;
}

}  // namespace sfwm

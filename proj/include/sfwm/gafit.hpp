#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfwm/fiber.hpp"
#include "sfwm/processes.hpp"

namespace sfwm {

/// One measured (or synthetic) pair of energy-conserving peaks.
struct PeakObservation {
    double pump_nm = 0.0;
    std::string label;  // peak-pair identifier, e.g. "A"
    double signal_nm = 0.0;  // lambda > lambda_p
    double idler_nm = 0.0;   // lambda < lambda_p
    std::optional<LPMode> signal_mode;
    std::optional<LPMode> idler_mode;
    double signal_width_nm = 0.0;
    double idler_width_nm = 0.0;
    double pump_bandwidth_nm = 0.0;

    /// |1/ls + 1/li - 2/lp| in 1/nm; reported, never enforced.
    double energy_residual() const noexcept;
};

enum class FitnessVariant {
    sum_of_abs,  // sum of |Delta k|
    abs_of_sum,  // |sum of Delta k|
};

/// Index order of the genes in an individual.
enum Gene : std::size_t { kCoreRadius = 0, kNumericalAperture = 1, kDelta = 2, kDeltaP = 3 };
using Genome = std::array<double, 4>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

struct GAConfig {
    std::size_t population_size = 200;
    std::size_t generations = 300;
    double elite_fraction = 0.05;
    std::size_t tournament_size = 3;
    double mutation_rate = 0.15;
    /// Gaussian mutation sigma per gene as a fraction of the bound width.
    Genome mutation_scale{0.02, 0.02, 0.02, 0.02};
    /// Mutation sigma at the last generation relative to the first; the
    /// sigma decays geometrically in between. 1 disables the decay.
    double mutation_decay = 1.0;
    /// Budget of a simplex refinement of the best individual after the last
    /// generation; 0 disables it.
    std::size_t polish_evaluations = 4000;
    std::array<Interval, 4> bounds{{{1.0, 2.5}, {0.10, 0.30}, {0.5e-4, 5e-4}, {0.5e-4, 10e-4}}};
    FitnessVariant fitness_variant = FitnessVariant::sum_of_abs;
    std::uint64_t seed = 1;
    /// Restrict each peak pair to processes matching its measured modes.
    bool use_mode_constraints = true;
    /// Solutions closer than this relative distance in every gene are merged.
    double merge_tolerance = 0.005;
    double length_m = 0.145;
    CladdingMaterial cladding = CladdingMaterial::fused_silica;
    /// Fitness evaluation threads. Results do not depend on this.
    std::size_t workers = 1;
    /// Number of ranked solutions for which peak deviations are computed.
    std::size_t report_count = 10;
    /// Candidate processes; empty means the 15 xx-yy processes of the
    /// LP01/LP11 basis.
    std::vector<ProcessSpec> candidates;

    /// Throws DomainError on inconsistent settings.
    void validate() const;
};

using Assignment = std::map<std::string, ProcessSpec>;

struct PeakDeviation {
    std::string label;
    double pump_nm = 0.0;
    double signal_observed_nm = 0.0;
    double signal_predicted_nm = 0.0;
    double idler_observed_nm = 0.0;
    double idler_predicted_nm = 0.0;

    double max_abs_nm() const noexcept;
};

struct FitSolution {
    FiberParams params;
    Assignment assignment;
    double fitness_per_m = 0.0;
    double max_peak_deviation_nm = 0.0;
    std::vector<PeakDeviation> deviations;
};

FiberParams fiber_from_genome(const Genome& genome, double length_m,
                              CladdingMaterial cladding = CladdingMaterial::fused_silica);
Genome genome_from_fiber(const FiberParams& fiber);

/// Aggregate mismatch Delta k_T (1/m) of the assigned processes at the
/// observed peak frequencies. +infinity if any wave is beyond cutoff or a
/// label has no assigned process.
double fitness(const FiberParams& params, std::span<const PeakObservation> observations,
               const Assignment& assignment, FitnessVariant variant = FitnessVariant::sum_of_abs);

struct AssignmentResult {
    Assignment assignment;
    double fitness_per_m = 0.0;
    /// Number of candidate processes tried for each peak label.
    std::map<std::string, std::size_t> candidates_tested;
};

/// Candidates compatible with the measured signal/idler modes of every
/// observation carrying `label`.
std::vector<ProcessSpec> compatible_processes(std::span<const PeakObservation> observations,
                                              const std::string& label,
                                              std::span<const ProcessSpec> viable_set);

/// Exhaustive minimization of the fitness over one process per peak label.
/// Throws AssignmentError naming the label if no candidate is compatible,
/// and when the viable set is empty.
AssignmentResult assign_processes(const FiberParams& params, std::span<const PeakObservation> observations,
                                  std::span<const ProcessSpec> viable_set, bool use_mode_constraints = true,
                                  FitnessVariant variant = FitnessVariant::sum_of_abs);

struct GAResult {
    std::vector<FitSolution> ranked;
    /// Best fitness of each generation, index 0 being the initial population.
    std::vector<double> best_fitness_history;
};

/// Called once per generation with every evaluated genome and its fitness.
using GAObserver = std::function<void(std::size_t generation, std::span<const Genome> genomes,
                                      std::span<const double> fitness)>;

GAResult ga_run(std::span<const PeakObservation> observations, const GAConfig& config,
                const GAObserver& observer = {});

/// Fits (NA, Delta, Delta_p) with r0 pinned at each grid value.
std::vector<FitSolution> solution_family(std::span<const PeakObservation> observations,
                                         std::span<const double> r0_grid_um, const GAConfig& config);

/// Predicted (signal, idler) peak of `process` at `pump_nm`: the root of
/// Delta k nearest to `signal_guess_nm` within +/- window_nm.
std::optional<std::array<double, 2>> predict_peak(const FiberParams& fiber, const ProcessSpec& process,
                                                  double pump_nm, double signal_guess_nm,
                                                  double window_nm = 25.0);

std::vector<PeakDeviation> peak_deviations(const FiberParams& fiber, std::span<const PeakObservation> observations,
                                           const Assignment& assignment);

struct SimulationOptions {
    double signal_width_nm = 0.0;
    double idler_width_nm = 0.0;
    double pump_bandwidth_nm = 0.5;
    bool record_modes = true;
};

/// Synthetic observations: for every pump wavelength and labelled process,
/// the phasematched pair with the signal on the red side closest to the
/// pump. Throws NumericalError if a process has no such root.
std::vector<PeakObservation> simulate_peaks(const FiberParams& fiber, const Assignment& processes,
                                            std::span<const double> pump_nm,
                                            const SimulationOptions& options = {});

enum class Feasibility { phasematched, mismatched, unsupported };

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 1;
    double at(std::size_t i) const noexcept
    {
        return n < 2 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
};

/// Phasematching classification over (r0, NA); cells are stored with the
/// NA index varying fastest.
struct FeasibilityMap {
    GridAxis r0_um;
    GridAxis na;
    std::vector<Feasibility> cells;
    std::vector<double> l_delta_k;  // |L Delta k|, NaN for unsupported cells

    Feasibility at(std::size_t ir, std::size_t ina) const { return cells[ir * na.n + ina]; }
    std::size_t count(Feasibility f) const;
};

FeasibilityMap feasibility_map(const ProcessSpec& process, double pump_nm, double signal_nm, double idler_nm,
                               const GridAxis& r0_um, const GridAxis& na, double delta, double delta_p,
                               double length_m, CladdingMaterial cladding = CladdingMaterial::fused_silica);

}  // namespace sfwm

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "slotkit/pipeline.hpp"
#include "slotkit/remote.hpp"
#include "slotkit/scene.hpp"

namespace slotkit {

// True iff the anchor lies within tol (closed ball) of the slot center.
bool instruction_accuracy(const WorldPoint& anchor, const WorldPoint& gt_center,
                          double tol = 0.02);

// True iff the anchor falls inside the slot's inner region (tol 0).
bool coarse_accuracy(const WorldPoint& anchor, const Scene& scene, const Slot& gt_slot);

// Parametric stand-in for a goal-conditioned placement policy: drops the
// object at the goal anchor plus a Gaussian lateral offset, yaw chosen as the
// best fit (straight or 90 degrees) for the slot nearest the anchor.
struct ExecutorModel {
    double lateral_sigma = 0.002;  // meters, std per horizontal axis
    std::uint64_t seed = 0;
};

struct Placement {
    RigidTransform pose;        // final object pose; base center at the drop point
    std::optional<int> slot;    // slot whose inner region contains the footprint
    bool success = false;       // slot is one of the target slots
};

// Deterministic per (goal, scene, exec). target_slots is the instruction's
// resolved slot set: a singleton for pinpoint tasks, the feasible set for
// open-ended ones.
Placement execute_placement(const VisualGoal& goal, const Scene& scene,
                            const ExecutorModel& exec, const std::set<int>& target_slots);

struct TrialRecord {
    int trial = 0;  // global id; records are folded in this order
    Category category = Category::Ordinal;
    int variant = 1;
    std::string scene_id;
    std::string instruction;
    std::string constraint;          // canonical form
    std::vector<int> target_slots;   // sorted
    WorldPoint anchor;               // zeros when the backend failed
    std::optional<RigidTransform> placed;
    bool sr = false;
    bool ia = false;
    bool ca = false;
    bool backend_failed = false;
    std::string error;               // "<ErrorClass>: <message>" when failed
    double latency_sec = 0;          // wall time inside the backend's ground()
};

nlohmann::json record_to_json(const TrialRecord& rec);
TrialRecord record_from_json(const nlohmann::json& j);

// Field-wise equality ignoring latency_sec, which is wall-clock and therefore
// excluded from reproducibility comparisons.
bool records_equivalent(const TrialRecord& a, const TrialRecord& b);

struct CategoryScore {
    int trials = 0;
    int sr = 0;
    int ia = 0;
    int ca = 0;
};

// 100 * part / total, 0 when total is 0.
double percent(int part, int total);

struct SuiteReport {
    std::string fingerprint;
    std::map<Category, CategoryScore> per_category;
    CategoryScore overall;
    double mean_latency_sec = 0;
};

// Deterministic fold over records ordered by trial id.
SuiteReport report_from_records(std::vector<TrialRecord> records,
                                const std::string& fingerprint);

nlohmann::json report_to_json(const SuiteReport& report);
std::string report_csv(const SuiteReport& report);    // category matrix, percentages
std::string format_report(const SuiteReport& report); // human-readable table

struct SuiteConfig {
    std::vector<Category> categories = all_categories();
    int variants = 5;            // scene variants cycled per category
    int trials_per_category = 50;
    std::uint64_t seed = 2024;   // root seed; every stream derives from it
    double sphere_radius = kDefaultSphereRadius;
    double exec_sigma = 0.002;   // executor lateral noise, meters
    SceneGenParams scene;
    std::string backend_label = "oracle";  // part of the config fingerprint
    std::filesystem::path out_dir;         // empty: keep everything in memory
    bool verbose_artifacts = false;        // also persist overlays for successes
};

// Canonical one-line-per-field text form of the config; the fingerprint is
// its 64-bit FNV-1a hash in hex. Identical fingerprints mean runs are
// comparable record-for-record.
std::string canonical_config(const SuiteConfig& config);
std::string config_fingerprint(const SuiteConfig& config);

// Builds the backend for one trial given the scene and the slot an ideal
// grounder would mark (lowest-indexed target slot).
using BackendFactory =
    std::function<std::unique_ptr<GroundingBackend>(const Scene&, const Slot&)>;

BackendFactory oracle_factory(double sphere_radius = kDefaultSphereRadius);
// Oracle wrapped in Gaussian pixel noise; the per-trial seed derives from
// seed and the scene id so trial order does not matter.
BackendFactory perturbed_oracle_factory(double sigma_px, std::uint64_t seed,
                                        double sphere_radius = kDefaultSphereRadius);
BackendFactory remote_backend_factory(const RemoteConfig& config);

struct SuiteRun {
    SuiteReport report;
    std::vector<TrialRecord> records;
};

// Generates scene + instruction per trial, grounds through the backend,
// executes the placement, and scores SR/IA/CA. Backend and pipeline errors
// (NoMarker, DepthHole, TransportError, DimensionMismatch, BackendRefusal)
// fail the trial and are logged in its record; anything else propagates.
// When out_dir is set, writes records.jsonl plus goal overlays for failed
// trials (and successes under verbose_artifacts).
SuiteRun run_suite(const SuiteConfig& config, const BackendFactory& factory);

}  // namespace slotkit

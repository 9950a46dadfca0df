#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "slotkit/scene.hpp"

namespace slotkit {

enum class Cmp { Min, Max };

// Grid quadrant. "Lower" rows are row <= rows/2, "upper" rows are the
// mirrored band from the top; on odd grids the middle row/column belongs to
// neither, so quadrants never overlap.
enum class GridRegion { LowerLeft, LowerRight, UpperLeft, UpperRight };

std::string to_string(Cmp c);
std::string to_string(GridRegion r);

// A slot-selecting expression. Filters (ordinal/row/col/region/feasible/
// affordance) keep slots that satisfy a predicate; comparatives (size/height/
// distance/knowledge) keep the extremal slots of a ranking key. `land` is an
// n-ary conjunction, `negate` a complement over the whole tray.
struct Constraint {
    enum class Kind {
        Ordinal,     // row/col equality
        RowIs,       // row equality
        ColIs,       // col equality
        InRegion,    // grid quadrant membership
        Size,        // extremal inner area
        Height,      // extremal rim top
        Distance,    // extremal distance to a named object
        Feasible,    // pick target fits with clearance
        Affordance,  // feasible and deep enough to hold the object upright
        Knowledge,   // nearest slot to the unique bearer of an attribute
        Not,
        And,
    };

    Kind kind = Kind::Feasible;
    int row = 0;
    int col = 0;
    Cmp cmp = Cmp::Min;
    GridRegion region = GridRegion::LowerLeft;
    std::string name;  // Distance reference object or Knowledge attribute
    std::vector<Constraint> children;

    bool operator==(const Constraint&) const = default;

    static Constraint ordinal(int row, int col);
    static Constraint row_is(int row);
    static Constraint col_is(int col);
    static Constraint in_region(GridRegion r);
    static Constraint size(Cmp c);
    static Constraint height(Cmp c);
    static Constraint distance(std::string ref, Cmp c);
    static Constraint feasible();
    static Constraint affordance_stable();
    static Constraint knowledge(std::string key);
    static Constraint negate(Constraint child);
    static Constraint all_of(std::vector<Constraint> children);

    // Node count along the longest root-to-leaf path; atoms have depth 1.
    int depth() const;
    // True when the subtree contains a ranking atom (size/height/distance/
    // knowledge). Conjunctions evaluate such subtrees after the plain filters.
    bool has_comparative() const;
};

// Canonical s-expression form, e.g. "(and (not (col 1)) (size max))".
// parse_constraint(print_constraint(c)) == c for every well-formed tree.
std::string print_constraint(const Constraint& c);

// Parses the grammar documented in docs/constraint-grammar.md. Rejects
// malformed input, depth > 4, and a negation directly inside a negation.
Constraint parse_constraint(const std::string& src);

// Evaluates the constraint against a scene and returns the selected slot
// indices. Comparatives rank the slots surviving their non-comparative
// conjunction siblings; at top level they rank the whole tray. Negation
// complements against the whole tray. Throws UnknownReference when a
// distance target or knowledge attribute does not identify exactly one
// scene object.
std::set<int> resolve(const Scene& scene, const Constraint& c);

enum class TargetMode { Unique, AnyOfSet };

std::string to_string(TargetMode m);
TargetMode target_mode_from_string(const std::string& s);

struct Instruction {
    std::string text;
    Constraint constraint;
    Category category = Category::Ordinal;
    TargetMode target_mode = TargetMode::Unique;
};

// Deterministic for fixed (scene, category, variant, seed). The surface text
// cycles through at least five templates per category as `variant` advances;
// the constraint's parameters are drawn from the derived stream. Throws
// UnsatisfiableOnScene if no satisfiable constraint is found within the
// internal retry budget (which indicates a generator bug, not bad input).
Instruction generate_instruction(const Scene& scene, Category category, int variant,
                                 std::uint64_t seed);

}  // namespace slotkit

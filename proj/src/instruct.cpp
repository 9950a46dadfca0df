#include "slotkit/instruct.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <utility>

#include "slotkit/errors.hpp"
#include "slotkit/rng.hpp"

namespace slotkit {

std::string to_string(Cmp c) { return c == Cmp::Min ? "min" : "max"; }

std::string to_string(GridRegion r) {
    switch (r) {
        case GridRegion::LowerLeft: return "lower-left";
        case GridRegion::LowerRight: return "lower-right";
        case GridRegion::UpperLeft: return "upper-left";
        case GridRegion::UpperRight: return "upper-right";
    }
    return "lower-left";
}

std::string to_string(TargetMode m) { return m == TargetMode::Unique ? "unique" : "any-of-set"; }

TargetMode target_mode_from_string(const std::string& s) {
    if (s == "unique") return TargetMode::Unique;
    if (s == "any-of-set") return TargetMode::AnyOfSet;
    throw ConfigError("unknown target mode '" + s + "'");
}

Constraint Constraint::ordinal(int row, int col) {
    Constraint c;
    c.kind = Kind::Ordinal;
    c.row = row;
    c.col = col;
    return c;
}

Constraint Constraint::row_is(int row) {
    Constraint c;
    c.kind = Kind::RowIs;
    c.row = row;
    return c;
}

Constraint Constraint::col_is(int col) {
    Constraint c;
    c.kind = Kind::ColIs;
    c.col = col;
    return c;
}

Constraint Constraint::in_region(GridRegion r) {
    Constraint c;
    c.kind = Kind::InRegion;
    c.region = r;
    return c;
}

Constraint Constraint::size(Cmp cmp) {
    Constraint c;
    c.kind = Kind::Size;
    c.cmp = cmp;
    return c;
}

Constraint Constraint::height(Cmp cmp) {
    Constraint c;
    c.kind = Kind::Height;
    c.cmp = cmp;
    return c;
}

Constraint Constraint::distance(std::string ref, Cmp cmp) {
    Constraint c;
    c.kind = Kind::Distance;
    c.name = std::move(ref);
    c.cmp = cmp;
    return c;
}

Constraint Constraint::feasible() {
    Constraint c;
    c.kind = Kind::Feasible;
    return c;
}

Constraint Constraint::affordance_stable() {
    Constraint c;
    c.kind = Kind::Affordance;
    return c;
}

Constraint Constraint::knowledge(std::string key) {
    Constraint c;
    c.kind = Kind::Knowledge;
    c.name = std::move(key);
    return c;
}

Constraint Constraint::negate(Constraint child) {
    Constraint c;
    c.kind = Kind::Not;
    c.children.push_back(std::move(child));
    return c;
}

Constraint Constraint::all_of(std::vector<Constraint> children) {
    Constraint c;
    c.kind = Kind::And;
    c.children = std::move(children);
    return c;
}

int Constraint::depth() const {
    int deepest = 0;
    for (const auto& ch : children) deepest = std::max(deepest, ch.depth());
    return 1 + deepest;
}

bool Constraint::has_comparative() const {
    switch (kind) {
        case Kind::Size:
        case Kind::Height:
        case Kind::Distance:
        case Kind::Knowledge: return true;
        case Kind::Not:
        case Kind::And:
            return std::any_of(children.begin(), children.end(),
                               [](const Constraint& ch) { return ch.has_comparative(); });
        default: return false;
    }
}

std::string print_constraint(const Constraint& c) {
    switch (c.kind) {
        case Constraint::Kind::Ordinal:
            return "(ordinal " + std::to_string(c.row) + " " + std::to_string(c.col) + ")";
        case Constraint::Kind::RowIs: return "(row " + std::to_string(c.row) + ")";
        case Constraint::Kind::ColIs: return "(col " + std::to_string(c.col) + ")";
        case Constraint::Kind::InRegion: return "(region " + to_string(c.region) + ")";
        case Constraint::Kind::Size: return "(size " + to_string(c.cmp) + ")";
        case Constraint::Kind::Height: return "(height " + to_string(c.cmp) + ")";
        case Constraint::Kind::Distance: return "(distance " + c.name + " " + to_string(c.cmp) + ")";
        case Constraint::Kind::Feasible: return "(feasible)";
        case Constraint::Kind::Affordance: return "(affordance stable)";
        case Constraint::Kind::Knowledge: return "(knowledge " + c.name + ")";
        case Constraint::Kind::Not: return "(not " + print_constraint(c.children[0]) + ")";
        case Constraint::Kind::And: {
            std::string s = "(and";
            for (const auto& ch : c.children) s += " " + print_constraint(ch);
            return s + ")";
        }
    }
    return "";
}

namespace {

constexpr int kMaxDepth = 4;

struct Parser {
    const std::string& src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at, const std::string& expected) {
        throw ParseError(msg, at, expected);
    }

    void expect_open() {
        skip_ws();
        if (pos >= src.size() || src[pos] != '(') fail("malformed constraint", pos, "'('");
        ++pos;
    }

    void expect_close() {
        skip_ws();
        if (pos >= src.size() || src[pos] != ')') fail("malformed constraint", pos, "')'");
        ++pos;
    }

    static bool word_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    }

    std::string word(const std::string& expected) {
        skip_ws();
        const std::size_t start = pos;
        while (pos < src.size() && word_char(src[pos])) ++pos;
        if (pos == start) fail("malformed constraint", start, expected);
        return src.substr(start, pos - start);
    }

    int integer(const std::string& what) {
        skip_ws();
        const std::size_t start = pos;
        const std::string w = word("positive integer " + what);
        if (w.empty() || w[0] == '0' || w.size() > 6 ||
            !std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
            fail("bad integer", start, "positive integer " + what);
        return std::stoi(w);
    }

    Cmp cmp_word() {
        skip_ws();
        const std::size_t start = pos;
        const std::string w = word("'min' or 'max'");
        if (w == "min") return Cmp::Min;
        if (w == "max") return Cmp::Max;
        fail("bad comparison", start, "'min' or 'max'");
    }

    GridRegion region_word() {
        skip_ws();
        const std::size_t start = pos;
        const std::string w = word("region name");
        if (w == "lower-left") return GridRegion::LowerLeft;
        if (w == "lower-right") return GridRegion::LowerRight;
        if (w == "upper-left") return GridRegion::UpperLeft;
        if (w == "upper-right") return GridRegion::UpperRight;
        fail("bad region", start,
             "'lower-left', 'lower-right', 'upper-left', or 'upper-right'");
    }

    std::string ident(const std::string& what) {
        skip_ws();
        const std::size_t start = pos;
        const std::string w = word(what);
        if (w[0] < 'a' || w[0] > 'z') fail("bad name", start, what);
        return w;
    }

    Constraint expr(int level) {
        skip_ws();
        const std::size_t open = pos;
        expect_open();
        if (level > kMaxDepth)
            fail("constraint nested too deeply", open,
                 "nesting of at most " + std::to_string(kMaxDepth) + " levels");
        const std::size_t head_at = pos;
        const std::string head = word("constraint keyword");
        Constraint out;
        if (head == "ordinal") {
            const int row = integer("row");
            const int col = integer("column");
            out = Constraint::ordinal(row, col);
        } else if (head == "row") {
            out = Constraint::row_is(integer("row"));
        } else if (head == "col") {
            out = Constraint::col_is(integer("column"));
        } else if (head == "region") {
            out = Constraint::in_region(region_word());
        } else if (head == "size") {
            out = Constraint::size(cmp_word());
        } else if (head == "height") {
            out = Constraint::height(cmp_word());
        } else if (head == "distance") {
            std::string ref = ident("object name");
            out = Constraint::distance(std::move(ref), cmp_word());
        } else if (head == "feasible") {
            out = Constraint::feasible();
        } else if (head == "affordance") {
            skip_ws();
            const std::size_t pred_at = pos;
            if (word("'stable'") != "stable") fail("bad predicate", pred_at, "'stable'");
            out = Constraint::affordance_stable();
        } else if (head == "knowledge") {
            out = Constraint::knowledge(ident("attribute name"));
        } else if (head == "not") {
            skip_ws();
            const std::size_t child_at = pos;
            Constraint child = expr(level + 1);
            if (child.kind == Constraint::Kind::Not)
                fail("negation directly inside negation", child_at,
                     "a constraint other than 'not'");
            out = Constraint::negate(std::move(child));
        } else if (head == "and") {
            std::vector<Constraint> children;
            while (true) {
                skip_ws();
                if (pos >= src.size() || src[pos] != '(') break;
                children.push_back(expr(level + 1));
            }
            if (children.size() < 2) {
                skip_ws();
                fail("conjunction needs at least two sub-constraints", pos,
                     "'(' starting another sub-constraint");
            }
            out = Constraint::all_of(std::move(children));
        } else {
            fail("unknown constraint keyword '" + head + "'", head_at,
                 "one of ordinal, row, col, region, size, height, distance, feasible, "
                 "affordance, knowledge, not, and");
        }
        expect_close();
        return out;
    }
};

}  // namespace

Constraint parse_constraint(const std::string& src) {
    Parser p{src};
    Constraint c = p.expr(1);
    p.skip_ws();
    if (p.pos != src.size()) p.fail("trailing input", p.pos, "end of input");
    return c;
}

namespace {

bool region_contains_cell(const Tray& tray, int row, int col, GridRegion r) {
    const int low_rows = tray.rows / 2;
    const int low_cols = tray.cols / 2;
    const bool lower = row <= low_rows;
    const bool upper = row >= tray.rows - low_rows + 1;
    const bool left = col <= low_cols;
    const bool right = col >= tray.cols - low_cols + 1;
    switch (r) {
        case GridRegion::LowerLeft: return lower && left;
        case GridRegion::LowerRight: return lower && right;
        case GridRegion::UpperLeft: return upper && left;
        case GridRegion::UpperRight: return upper && right;
    }
    return false;
}

std::set<int> intersect(const std::set<int>& a, const std::set<int>& b) {
    std::set<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

struct Evaluator {
    const Scene& scene;
    std::set<int> all;

    template <typename Pred>
    std::set<int> filter(Pred pred) const {
        std::set<int> out;
        for (int i = 0; i < static_cast<int>(scene.tray.slots.size()); ++i)
            if (pred(scene.tray.slots[i])) out.insert(i);
        return out;
    }

    // Slots of `scope` whose key attains the extremum. Exact ties all survive;
    // the generator's ambiguity margins keep generated constraints tie-free.
    template <typename Key>
    std::set<int> extremal(const std::set<int>& scope, Key key, Cmp cmp) const {
        std::set<int> out;
        bool first = true;
        double best = 0;
        for (int i : scope) {
            const double v = key(scene.tray.slots[i]);
            if (first || (cmp == Cmp::Max ? v > best : v < best)) {
                best = v;
                first = false;
            }
        }
        for (int i : scope)
            if (key(scene.tray.slots[i]) == best) out.insert(i);
        return out;
    }

    const SceneObject& named_object(const std::string& name) const {
        const SceneObject* obj = scene.find_object(name);
        if (!obj) throw UnknownReference("no object named '" + name + "' in the scene");
        return *obj;
    }

    const SceneObject& attribute_bearer(const std::string& key) const {
        std::string bearer;
        int count = 0;
        for (const auto& [name, attrs] : scene.knowledge) {
            if (std::find(attrs.begin(), attrs.end(), key) != attrs.end()) {
                bearer = name;
                ++count;
            }
        }
        if (count == 0) throw UnknownReference("no object with attribute '" + key + "'");
        if (count > 1)
            throw UnknownReference("attribute '" + key + "' does not identify a unique object");
        return named_object(bearer);
    }

    std::set<int> eval(const Constraint& c, const std::set<int>& scope) const {
        using Kind = Constraint::Kind;
        switch (c.kind) {
            case Kind::Ordinal:
                return filter([&](const Slot& s) { return s.row == c.row && s.col == c.col; });
            case Kind::RowIs:
                return filter([&](const Slot& s) { return s.row == c.row; });
            case Kind::ColIs:
                return filter([&](const Slot& s) { return s.col == c.col; });
            case Kind::InRegion:
                return filter([&](const Slot& s) {
                    return region_contains_cell(scene.tray, s.row, s.col, c.region);
                });
            case Kind::Feasible:
                return feasible_slots(scene, scene.pick_target(), kFeasibilityClearance);
            case Kind::Affordance: {
                const SceneObject& obj = scene.pick_target();
                std::set<int> out;
                for (int i : feasible_slots(scene, obj, kFeasibilityClearance))
                    if (slot_is_stable(scene.tray.slots[i], obj)) out.insert(i);
                return out;
            }
            case Kind::Size:
                return extremal(scope, slot_area, c.cmp);
            case Kind::Height:
                return extremal(scope, rim_top, c.cmp);
            case Kind::Distance: {
                const SceneObject& obj = named_object(c.name);
                return extremal(
                    scope, [&](const Slot& s) { return reference_distance(s, obj); }, c.cmp);
            }
            case Kind::Knowledge: {
                const SceneObject& obj = attribute_bearer(c.name);
                return extremal(
                    scope, [&](const Slot& s) { return reference_distance(s, obj); }, Cmp::Min);
            }
            case Kind::Not:
                // Complement within the whole tray; the child also ranks over
                // the whole tray, independent of any conjunction it sits in.
                {
                    std::set<int> out;
                    std::set<int> inner = eval(c.children[0], all);
                    std::set_difference(all.begin(), all.end(), inner.begin(), inner.end(),
                                        std::inserter(out, out.begin()));
                    return out;
                }
            case Kind::And: {
                std::set<int> base = scope;
                for (const auto& ch : c.children)
                    if (!ch.has_comparative()) base = intersect(base, eval(ch, scope));
                std::set<int> out = base;
                for (const auto& ch : c.children)
                    if (ch.has_comparative()) out = intersect(out, eval(ch, base));
                return out;
            }
        }
        return {};
    }
};

}  // namespace

std::set<int> resolve(const Scene& scene, const Constraint& c) {
    Evaluator ev{scene, scene.all_slot_indices()};
    return ev.eval(c, ev.all);
}

namespace {

std::string fill(std::string tmpl, const std::map<std::string, std::string>& vars) {
    for (const auto& [key, value] : vars) {
        const std::string token = "{" + key + "}";
        for (std::size_t at = tmpl.find(token); at != std::string::npos; at = tmpl.find(token))
            tmpl.replace(at, token.size(), value);
    }
    return tmpl;
}

std::string prose_region(GridRegion r) {
    std::string s = to_string(r);
    std::replace(s.begin(), s.end(), '-', ' ');
    return s;
}

const std::vector<std::string>& templates_for(Category category) {
    static const std::map<Category, std::vector<std::string>> table = {
        {Category::Ordinal,
         {"Place it in the slot at row {row}, column {col}, counting rows from the bottom "
          "and columns from the left.",
          "Put the peg into row {row}, column {col}; rows count from the bottom, columns "
          "from the left.",
          "Insert it at grid position ({row}, {col}), that is row {row} from the bottom and "
          "column {col} from the left.",
          "The target is the compartment in row {row} from the bottom, column {col} from "
          "the left; place it there.",
          "Counting rows from the bottom and columns from the left, drop it into row {row}, "
          "column {col}."}},
        {Category::Size,
         {"Place it into the {cmp} compartment.",
          "Find the {cmp} slot on the tray and put it there.",
          "It belongs in the {cmp} of the compartments.",
          "Drop the peg into the {cmp} opening.",
          "Whichever slot is {cmp}, place it in that one."}},
        {Category::Height,
         {"Place it into the {cmp} slot.",
          "Put the peg into the compartment whose rim sits {cmp}.",
          "It goes in the {cmp} of the compartments.",
          "Choose the slot with the {cmp} opening and place it there.",
          "Set it into the {cmp} compartment on the tray."}},
        {Category::Distance,
         {"Place it in the slot {rel} the {ref}.",
          "Put the peg into the compartment {rel} the {ref}.",
          "Pick the slot that is {rel} the {ref} and place it there.",
          "It belongs in whichever compartment is {rel} the {ref}.",
          "Relative to the {ref}, use the {cmp} slot."}},
        {Category::Compositional,
         {"Place it in the {cmp} slot {filter}.",
          "Among the compartments {filter}, choose the {cmp} one and put it there.",
          "Considering only slots {filter}, it goes in the {cmp} one.",
          "Put the peg into the {cmp} compartment {filter}.",
          "Restrict to slots {filter}; place it in the {cmp} of those."}},
        {Category::Negation,
         {"Avoid {avoid}; place it in a slot where it still fits.",
          "Do not use {avoid}. Put it anywhere it fits.",
          "Anywhere that fits is fine, except {avoid}.",
          "Keep it out of {avoid}; pick a compartment it fits into.",
          "Place it in a slot it fits in, but not {avoid}."}},
        {Category::Vague,
         {"Put it wherever it fits.",
          "Place it in any compartment that can hold it.",
          "Find a slot the peg fits into and place it there.",
          "Any slot that accommodates it is fine.",
          "Stick it in some compartment it fits in."}},
        {Category::Affordance,
         {"Place it into the most stable compartment.",
          "Put the peg where it will stand upright without tipping over.",
          "Choose the slot that holds it most securely.",
          "It should not wobble; use the compartment that supports it best.",
          "Place it in the slot deep enough to keep it steady."}},
        {Category::Knowledge,
         {"Place it in the slot closest to the {attr} item.",
          "Put it next to the {attr} object, in the nearest compartment.",
          "Find the {attr} thing on the table and use the slot nearest to it.",
          "The slot nearest the {attr} item is the target.",
          "Place it as close as possible to the {attr} object."}},
    };
    return table.at(category);
}

struct Draft {
    Constraint constraint;
    std::map<std::string, std::string> vars;
};

// A conjunction filter plus its prose, used by compositional drafts.
struct FilterChoice {
    Constraint atom;
    std::string prose;
};

std::vector<FilterChoice> compositional_filters(const Scene& scene, Rng& rng) {
    const Tray& tray = scene.tray;
    std::vector<FilterChoice> out;
    const int r = static_cast<int>(rng.uniform_int(1, tray.rows));
    const int c = static_cast<int>(rng.uniform_int(1, tray.cols));
    out.push_back({Constraint::row_is(r),
                   "in row " + std::to_string(r) + ", counting from the bottom"});
    out.push_back({Constraint::col_is(c),
                   "in column " + std::to_string(c) + ", counting from the left"});
    out.push_back({Constraint::negate(Constraint::row_is(r)),
                   "outside row " + std::to_string(r) + " (rows count from the bottom)"});
    out.push_back({Constraint::negate(Constraint::col_is(c)),
                   "outside column " + std::to_string(c) + " (columns count from the left)"});
    const auto region = static_cast<GridRegion>(rng.uniform_int(0, 3));
    out.push_back({Constraint::in_region(region),
                   "in the " + prose_region(region) + " quarter of the tray"});
    out.push_back({Constraint::negate(Constraint::in_region(region)),
                   "outside the " + prose_region(region) + " quarter of the tray"});
    return out;
}

Draft draft_constraint(const Scene& scene, Category category, Rng& rng) {
    const Tray& tray = scene.tray;
    switch (category) {
        case Category::Ordinal: {
            const Slot& s = rng.pick(tray.slots);
            return {Constraint::ordinal(s.row, s.col),
                    {{"row", std::to_string(s.row)}, {"col", std::to_string(s.col)}}};
        }
        case Category::Size: {
            const Cmp cmp = rng.coin() ? Cmp::Max : Cmp::Min;
            return {Constraint::size(cmp), {{"cmp", cmp == Cmp::Max ? "largest" : "smallest"}}};
        }
        case Category::Height: {
            const Cmp cmp = rng.coin() ? Cmp::Max : Cmp::Min;
            return {Constraint::height(cmp), {{"cmp", cmp == Cmp::Max ? "highest" : "lowest"}}};
        }
        case Category::Distance: {
            std::vector<std::string> refs;
            for (const auto& obj : scene.objects)
                if (obj.role == ObjectRole::Reference) refs.push_back(obj.name);
            if (refs.empty()) throw UnsatisfiableOnScene("scene has no reference objects");
            const std::string ref = rng.pick(refs);
            const Cmp cmp = rng.coin() ? Cmp::Max : Cmp::Min;
            return {Constraint::distance(ref, cmp),
                    {{"ref", ref},
                     {"rel", cmp == Cmp::Max ? "farthest from" : "closest to"},
                     {"cmp", cmp == Cmp::Max ? "farthest" : "closest"}}};
        }
        case Category::Compositional: {
            const auto filters = compositional_filters(scene, rng);
            const FilterChoice& f = rng.pick(filters);
            const bool by_size = rng.coin();
            const Cmp cmp = rng.coin() ? Cmp::Max : Cmp::Min;
            const Constraint comp = by_size ? Constraint::size(cmp) : Constraint::height(cmp);
            const std::string word = by_size ? (cmp == Cmp::Max ? "largest" : "smallest")
                                             : (cmp == Cmp::Max ? "highest" : "lowest");
            return {Constraint::all_of({f.atom, comp}), {{"cmp", word}, {"filter", f.prose}}};
        }
        case Category::Negation: {
            const std::set<int> fs =
                feasible_slots(scene, scene.pick_target(), kFeasibilityClearance);
            std::vector<FilterChoice> atoms;
            for (int i : fs) {
                const Slot& s = tray.slots[i];
                atoms.push_back({Constraint::ordinal(s.row, s.col),
                                 "the slot at row " + std::to_string(s.row) + ", column " +
                                     std::to_string(s.col) +
                                     " (rows from the bottom, columns from the left)"});
            }
            auto count_in = [&](auto pred) {
                int n = 0;
                for (int i : fs)
                    if (pred(tray.slots[i])) ++n;
                return n;
            };
            for (int r = 1; r <= tray.rows; ++r)
                if (count_in([&](const Slot& s) { return s.row == r; }) == 1)
                    atoms.push_back({Constraint::row_is(r),
                                     "row " + std::to_string(r) + ", counting from the bottom"});
            for (int c = 1; c <= tray.cols; ++c)
                if (count_in([&](const Slot& s) { return s.col == c; }) == 1)
                    atoms.push_back({Constraint::col_is(c),
                                     "column " + std::to_string(c) + ", counting from the left"});
            for (int q = 0; q < 4; ++q) {
                const auto region = static_cast<GridRegion>(q);
                if (count_in([&](const Slot& s) {
                        return region_contains_cell(tray, s.row, s.col, region);
                    }) == 1)
                    atoms.push_back({Constraint::in_region(region),
                                     "the " + prose_region(region) + " cells"});
            }
            const FilterChoice& a = rng.pick(atoms);
            return {Constraint::all_of({Constraint::negate(a.atom), Constraint::feasible()}),
                    {{"avoid", a.prose}}};
        }
        case Category::Vague:
            return {Constraint::feasible(), {}};
        case Category::Affordance:
            return {Constraint::affordance_stable(), {}};
        case Category::Knowledge: {
            std::map<std::string, int> counts;
            for (const auto& [name, attrs] : scene.knowledge)
                for (const auto& a : attrs) ++counts[a];
            std::vector<std::string> unique;
            for (const auto& [attr, n] : counts)
                if (n == 1) unique.push_back(attr);
            if (unique.empty())
                throw UnsatisfiableOnScene("scene has no uniquely held attribute");
            const std::string attr = rng.pick(unique);
            return {Constraint::knowledge(attr), {{"attr", attr}}};
        }
    }
    throw UnsatisfiableOnScene("unknown category");
}

}  // namespace

Instruction generate_instruction(const Scene& scene, Category category, int variant,
                                 std::uint64_t seed) {
    Rng rng(derive_seed(derive_seed(seed, scene.id()),
                        "instr/" + to_string(category) + "/v" + std::to_string(variant)));
    const auto& templates = templates_for(category);
    const TargetMode mode =
        category == Category::Vague ? TargetMode::AnyOfSet : TargetMode::Unique;

    constexpr int kRetries = 32;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        Draft d = draft_constraint(scene, category, rng);
        const std::set<int> target = resolve(scene, d.constraint);
        const bool ok =
            mode == TargetMode::Unique ? target.size() == 1 : !target.empty();
        if (!ok) continue;
        Instruction ins;
        ins.text = fill(templates[static_cast<std::size_t>(variant - 1) % templates.size()],
                        d.vars);
        ins.constraint = std::move(d.constraint);
        ins.category = category;
        ins.target_mode = mode;
        return ins;
    }
    throw UnsatisfiableOnScene("no satisfiable " + to_string(category) +
                               " constraint found for scene " + scene.id());
}

}  // namespace slotkit

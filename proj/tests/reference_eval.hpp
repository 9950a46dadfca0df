#pragma once

// Independent reference evaluator for constraint resolution. Works on
// membership vectors and recomputes every predicate from the raw scene data;
// it shares no code with resolve(). Test-only helper.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "slotkit/errors.hpp"
#include "slotkit/instruct.hpp"
#include "slotkit/scene.hpp"

namespace refeval {

using namespace slotkit;

using Members = std::vector<char>;

inline Members everything(const Scene& sc) {
    return Members(sc.tray.slots.size(), 1);
}

inline bool ref_contains_comparative(const Constraint& c) {
    using K = Constraint::Kind;
    if (c.kind == K::Size || c.kind == K::Height || c.kind == K::Distance ||
        c.kind == K::Knowledge)
        return true;
    for (const auto& ch : c.children)
        if (ref_contains_comparative(ch)) return true;
    return false;
}

inline bool ref_fits(const Slot& s, const SceneObject& obj) {
    const double nx = obj.footprint_x + 2.0 * 0.002;
    const double ny = obj.footprint_y + 2.0 * 0.002;
    return (nx <= s.inner_dx && ny <= s.inner_dy) || (ny <= s.inner_dx && nx <= s.inner_dy);
}

inline bool ref_in_region(const Tray& t, const Slot& s, GridRegion r) {
    const bool lower = s.row <= t.rows / 2;
    const bool upper = s.row > t.rows - t.rows / 2;
    const bool left = s.col <= t.cols / 2;
    const bool right = s.col > t.cols - t.cols / 2;
    if (r == GridRegion::LowerLeft) return lower && left;
    if (r == GridRegion::LowerRight) return lower && right;
    if (r == GridRegion::UpperLeft) return upper && left;
    return upper && right;
}

inline const SceneObject& ref_bearer(const Scene& sc, const std::string& attr) {
    const SceneObject* found = nullptr;
    int hits = 0;
    for (const auto& [name, attrs] : sc.knowledge) {
        if (std::count(attrs.begin(), attrs.end(), attr) > 0) {
            ++hits;
            found = sc.find_object(name);
        }
    }
    if (hits != 1 || !found) throw UnknownReference("reference evaluator: " + attr);
    return *found;
}

inline Members ref_eval(const Scene& sc, const Constraint& c, const Members& scope) {
    using K = Constraint::Kind;
    const auto& slots = sc.tray.slots;
    const int n = static_cast<int>(slots.size());
    Members out(slots.size(), 0);

    auto mark_extremal = [&](auto key, bool want_max) {
        bool seen = false;
        double best = 0;
        for (int i = 0; i < n; ++i) {
            if (!scope[static_cast<std::size_t>(i)]) continue;
            const double v = key(slots[static_cast<std::size_t>(i)]);
            if (!seen || (want_max ? v > best : v < best)) {
                best = v;
                seen = true;
            }
        }
        for (int i = 0; i < n; ++i)
            if (scope[static_cast<std::size_t>(i)] &&
                key(slots[static_cast<std::size_t>(i)]) == best)
                out[static_cast<std::size_t>(i)] = 1;
    };

    switch (c.kind) {
        case K::Ordinal:
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    slots[static_cast<std::size_t>(i)].row == c.row &&
                    slots[static_cast<std::size_t>(i)].col == c.col;
            break;
        case K::RowIs:
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] = slots[static_cast<std::size_t>(i)].row == c.row;
            break;
        case K::ColIs:
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] = slots[static_cast<std::size_t>(i)].col == c.col;
            break;
        case K::InRegion:
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    ref_in_region(sc.tray, slots[static_cast<std::size_t>(i)], c.region);
            break;
        case K::Feasible:
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    ref_fits(slots[static_cast<std::size_t>(i)], sc.pick_target());
            break;
        case K::Affordance:
            for (int i = 0; i < n; ++i) {
                const Slot& s = slots[static_cast<std::size_t>(i)];
                out[static_cast<std::size_t>(i)] =
                    ref_fits(s, sc.pick_target()) && s.depth >= sc.pick_target().height / 2.0;
            }
            break;
        case K::Size:
            mark_extremal([](const Slot& s) { return s.inner_dx * s.inner_dy; },
                          c.cmp == Cmp::Max);
            break;
        case K::Height:
            mark_extremal([](const Slot& s) { return s.center.p.z(); }, c.cmp == Cmp::Max);
            break;
        case K::Distance: {
            const SceneObject* obj = sc.find_object(c.name);
            if (!obj) throw UnknownReference("reference evaluator: " + c.name);
            mark_extremal(
                [&](const Slot& s) { return (s.center.p - obj->pose.translation).norm(); },
                c.cmp == Cmp::Max);
            break;
        }
        case K::Knowledge: {
            const SceneObject& obj = ref_bearer(sc, c.name);
            mark_extremal(
                [&](const Slot& s) { return (s.center.p - obj.pose.translation).norm(); },
                false);
            break;
        }
        case K::Not: {
            const Members inner = ref_eval(sc, c.children[0], everything(sc));
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] = !inner[static_cast<std::size_t>(i)];
            break;
        }
        case K::And: {
            Members base = scope;
            for (const auto& ch : c.children) {
                if (ref_contains_comparative(ch)) continue;
                const Members m = ref_eval(sc, ch, scope);
                for (int i = 0; i < n; ++i)
                    base[static_cast<std::size_t>(i)] =
                        base[static_cast<std::size_t>(i)] && m[static_cast<std::size_t>(i)];
            }
            out = base;
            for (const auto& ch : c.children) {
                if (!ref_contains_comparative(ch)) continue;
                const Members m = ref_eval(sc, ch, base);
                for (int i = 0; i < n; ++i)
                    out[static_cast<std::size_t>(i)] =
                        out[static_cast<std::size_t>(i)] && m[static_cast<std::size_t>(i)];
            }
            break;
        }
    }
    return out;
}

inline std::set<int> ref_resolve(const Scene& sc, const Constraint& c) {
    const Members m = ref_eval(sc, c, everything(sc));
    std::set<int> out;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i]) out.insert(static_cast<int>(i));
    return out;
}

}  // namespace refeval

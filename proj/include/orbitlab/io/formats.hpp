#pragma once

// Line-oriented text formats. '#' starts a comment; blank lines are ignored.
//
// Lie ring (.ring):
//   p 5
//   k 1
//   rank 3
//   class 2                 (optional; checked against the computed class)
//   bracket 1 2  0 0 1      [e_1, e_2] = e_3, 1-based indices
//
// Metric group (.metric):
//   p 3
//   orders 1 1              cyclic factors Z/p^k_i
//   q 0 0                   q on generators, fractions "a/p^m"
//   gram 0 1/3              one row per generator
//   gram 1/3 0
//
// V-model (.vm): a "ring ... end" block, then
//   a 1 0                   one generator of the ideal per line
//   q / gram                as above, on the ring's group
//   section 0 1             optional explicit lifts, one per coset

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "orbitlab/lazard/lie_ring.hpp"
#include "orbitlab/metric/metric_group.hpp"
#include "orbitlab/orbits/coadjoint.hpp"
#include "orbitlab/vmodel/vmodel.hpp"

namespace orbitlab::io {

struct Line {
    int number = 0;
    std::vector<std::string> words;
};

class Source {
public:
    Source(std::string name, std::istream& in) : name_(std::move(name)) {
        std::string text;
        for (int n = 1; std::getline(in, text); ++n) {
            if (auto h = text.find('#'); h != std::string::npos) text.erase(h);
            std::istringstream ss(text);
            Line l{n, {}};
            for (std::string w; ss >> w;) l.words.push_back(w);
            if (!l.words.empty()) lines_.push_back(std::move(l));
        }
    }

    static Source open(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw InputError(path + ": cannot open file");
        return Source(path, f);
    }

    static Source from_string(const std::string& name, const std::string& text) {
        std::istringstream ss(text);
        return Source(name, ss);
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Line>& lines() const noexcept { return lines_; }

    [[noreturn]] void fail(int line, const std::string& what) const {
        throw InputError(name_ + ":" + std::to_string(line) + ": " + what);
    }
    [[noreturn]] void fail(const std::string& what) const { throw InputError(name_ + ": " + what); }

    /// Runs fn, prefixing any InputError with the location.
    template <class Fn>
    auto at(int line, Fn fn) const {
        try {
            return fn();
        } catch (const InputError& e) {
            fail(line, e.what());
        }
    }

private:
    std::string name_;
    std::vector<Line> lines_;
};

namespace detail {

inline std::int64_t parse_int(const Source& src, const Line& l, const std::string& w) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(w, &used);
    } catch (const std::exception&) {
        src.fail(l.number, "expected an integer, got '" + w + "'");
    }
    if (used != w.size()) src.fail(l.number, "expected an integer, got '" + w + "'");
    return v;
}

inline void arity(const Source& src, const Line& l, std::size_t n) {
    if (l.words.size() != n + 1)
        src.fail(l.number, "'" + l.words[0] + "' expects " + std::to_string(n) + " value(s), got " +
                               std::to_string(l.words.size() - 1));
}

inline std::vector<QpModZp> fractions(const Source& src, const Line& l, std::size_t from, std::int64_t p) {
    std::vector<QpModZp> out;
    for (std::size_t i = from; i < l.words.size(); ++i)
        out.push_back(src.at(l.number, [&] { return QpModZp::parse(l.words[i], p); }));
    return out;
}

struct RingFields {
    std::optional<std::int64_t> p;
    int k = 1;
    std::optional<int> rank, cls;
    int first_line = 0, class_line = 0;
    std::vector<Line> brackets;
};

inline bool ring_key(const Source& src, const Line& l, RingFields& f) {
    const std::string& key = l.words[0];
    if (key == "p") {
        arity(src, l, 1);
        f.p = parse_int(src, l, l.words[1]);
        if (!is_prime(*f.p)) src.fail(l.number, "p = " + l.words[1] + " is not prime");
    } else if (key == "k") {
        arity(src, l, 1);
        f.k = static_cast<int>(parse_int(src, l, l.words[1]));
    } else if (key == "rank") {
        arity(src, l, 1);
        f.rank = static_cast<int>(parse_int(src, l, l.words[1]));
    } else if (key == "class") {
        arity(src, l, 1);
        f.cls = static_cast<int>(parse_int(src, l, l.words[1]));
        f.class_line = l.number;
    } else if (key == "bracket") {
        f.brackets.push_back(l);
    } else {
        return false;
    }
    return true;
}

inline LieRing build_ring(const Source& src, const RingFields& f) {
    if (!f.p) src.fail(f.first_line, "missing 'p'");
    if (!f.rank) src.fail(f.first_line, "missing 'rank'");
    Modulus m = src.at(f.first_line, [&] { return Modulus(*f.p, f.k); });
    LieRing g = src.at(f.first_line, [&] { return LieRing(m, *f.rank); });
    std::map<std::pair<int, int>, int> seen;
    for (const auto& l : f.brackets) {
        arity(src, l, static_cast<std::size_t>(2 + g.rank()));
        int i = static_cast<int>(parse_int(src, l, l.words[1])) - 1;
        int j = static_cast<int>(parse_int(src, l, l.words[2])) - 1;
        auto key = std::minmax(i, j);
        if (seen.count(key)) src.fail(l.number, "bracket of this pair already given on line " + std::to_string(seen[key]));
        seen[key] = l.number;
        Vec v;
        for (std::size_t w = 3; w < l.words.size(); ++w) v.push_back(parse_int(src, l, l.words[w]));
        src.at(l.number, [&] {
            g.set_bracket(i, j, v);
            return 0;
        });
    }
    g.declared_class = f.cls;
    src.at(f.class_line ? f.class_line : f.first_line, [&] { return validate(g); });
    return g;
}

inline Vec parse_vec(const Source& src, const Line& l, std::size_t n) {
    arity(src, l, n);
    Vec v;
    for (std::size_t w = 1; w < l.words.size(); ++w) v.push_back(parse_int(src, l, l.words[w]));
    return v;
}

struct MetricFields {
    std::vector<QpModZp> q;
    std::vector<std::vector<QpModZp>> gram;
    int q_line = 0;
};

inline bool metric_key(const Source& src, const Line& l, std::int64_t p, MetricFields& f) {
    if (l.words[0] == "q") {
        if (f.q_line) src.fail(l.number, "'q' given twice");
        f.q = fractions(src, l, 1, p);
        f.q_line = l.number;
    } else if (l.words[0] == "gram") {
        f.gram.push_back(fractions(src, l, 1, p));
    } else {
        return false;
    }
    return true;
}

inline MetricGroup build_metric(const Source& src, AbelianGroup grp, MetricFields f, int line) {
    if (!f.q_line) src.fail(line, "missing 'q'");
    return src.at(f.q_line, [&] { return MetricGroup(std::move(grp), std::move(f.q), std::move(f.gram)); });
}

} // namespace detail

inline LieRing parse_ring(const Source& src) {
    detail::RingFields f;
    f.first_line = src.lines().empty() ? 0 : src.lines()[0].number;
    for (const auto& l : src.lines())
        if (!detail::ring_key(src, l, f)) src.fail(l.number, "unknown key '" + l.words[0] + "'");
    return detail::build_ring(src, f);
}

inline MetricGroup parse_metric(const Source& src) {
    std::optional<std::int64_t> p;
    std::vector<int> orders;
    detail::MetricFields f;
    int first = src.lines().empty() ? 0 : src.lines()[0].number;
    for (const auto& l : src.lines()) {
        if (l.words[0] == "p") {
            detail::arity(src, l, 1);
            p = detail::parse_int(src, l, l.words[1]);
            if (!is_prime(*p)) src.fail(l.number, "p = " + l.words[1] + " is not prime");
        } else if (l.words[0] == "orders") {
            for (std::size_t w = 1; w < l.words.size(); ++w)
                orders.push_back(static_cast<int>(detail::parse_int(src, l, l.words[w])));
        } else if (!p) {
            src.fail(l.number, "'p' must come first");
        } else if (!detail::metric_key(src, l, *p, f)) {
            src.fail(l.number, "unknown key '" + l.words[0] + "'");
        }
    }
    if (!p) src.fail(first, "missing 'p'");
    AbelianGroup grp = src.at(first, [&] { return AbelianGroup(*p, orders); });
    return detail::build_metric(src, std::move(grp), std::move(f), first);
}

/// Parsed .vm contents; the section is absent unless given explicitly.
struct VModelFile {
    LieRing ring;
    Span a;
    MetricGroup q;
    std::optional<std::vector<Vec>> section;

    VModelData data() const { return {ring, a, q, section ? *section : lexmin_section(ring, a)}; }
};

inline VModelFile parse_vmodel(const Source& src) {
    detail::RingFields rf;
    detail::MetricFields mf;
    std::vector<Line> a_lines, s_lines;
    enum { before, inside, after } state = before;
    int first = src.lines().empty() ? 0 : src.lines()[0].number;
    for (const auto& l : src.lines()) {
        const std::string& key = l.words[0];
        if (state == before) {
            if (key != "ring") src.fail(l.number, "expected a 'ring' block first");
            rf.first_line = l.number;
            state = inside;
        } else if (state == inside) {
            if (key == "end")
                state = after;
            else if (!detail::ring_key(src, l, rf))
                src.fail(l.number, "unknown key '" + key + "' in ring block");
        } else if (key == "a") {
            a_lines.push_back(l);
        } else if (key == "section") {
            s_lines.push_back(l);
        } else if (!detail::metric_key(src, l, rf.p.value_or(2), mf)) {
            src.fail(l.number, "unknown key '" + key + "'");
        }
    }
    if (state != after) src.fail(first, "unterminated ring block");
    LieRing g = detail::build_ring(src, rf);
    std::vector<Vec> gens;
    for (const auto& l : a_lines) gens.push_back(detail::parse_vec(src, l, g.dim()));
    Span a = g.span(gens);
    MetricGroup q = detail::build_metric(src, AbelianGroup(g.p(), std::vector<int>(g.dim(), g.k())), mf, first);
    std::optional<std::vector<Vec>> sec;
    if (!s_lines.empty()) {
        sec.emplace();
        for (const auto& l : s_lines) sec->push_back(detail::parse_vec(src, l, g.dim()));
    }
    return {g, a, q, sec};
}

/// Covector of fractions, "1/5,0,1/5" or space separated.
inline Character parse_character(const LieRing& g, std::string text) {
    for (auto& c : text)
        if (c == ',') c = ' ';
    std::istringstream ss(text);
    std::vector<QpModZp> vals;
    for (std::string w; ss >> w;) vals.push_back(QpModZp::parse(w, g.p()));
    if (vals.size() != g.dim())
        throw InputError("--chi: expected " + std::to_string(g.dim()) + " values, got " + std::to_string(vals.size()));
    return Character::from_values(g.modulus(), vals);
}

// Canonical serializations: fixed key order, brackets for i < j only, nonzero only.

inline std::string to_text(const LieRing& g) {
    std::ostringstream o;
    o << "p " << g.p() << "\nk " << g.k() << "\nrank " << g.rank() << "\nclass "
      << lower_central_series(g).nilpotency_class << "\n";
    for (int i = 0; i < g.rank(); ++i)
        for (int j = i + 1; j < g.rank(); ++j) {
            const Vec& v = g.basis_bracket(i, j);
            if (orbitlab::detail::is_zero(v)) continue;
            o << "bracket " << i + 1 << " " << j + 1;
            for (auto x : v) o << " " << x;
            o << "\n";
        }
    return o.str();
}

namespace detail {

inline void metric_body(std::ostringstream& o, const MetricGroup& m) {
    o << "q";
    for (const auto& v : m.generator_values()) o << " " << v.to_string();
    o << "\n";
    for (const auto& row : m.gram()) {
        o << "gram";
        for (const auto& v : row) o << " " << v.to_string();
        o << "\n";
    }
}

} // namespace detail

inline std::string to_text(const MetricGroup& m) {
    std::ostringstream o;
    o << "p " << m.p() << "\norders";
    for (int k : m.group().orders()) o << " " << k;
    o << "\n";
    detail::metric_body(o, m);
    return o.str();
}

inline std::string to_text(const VModelFile& f) {
    std::ostringstream o;
    o << "ring\n" << to_text(f.ring) << "end\n";
    for (const auto& v : f.a.generators()) {
        o << "a";
        for (auto x : v) o << " " << x;
        o << "\n";
    }
    detail::metric_body(o, f.q);
    if (f.section)
        for (const auto& v : *f.section) {
            o << "section";
            for (auto x : v) o << " " << x;
            o << "\n";
        }
    return o.str();
}

} // namespace orbitlab::io

#include "dgbar/dgbar.h"

#include "dgbar/textio.hpp"

#include <cctype>
#include <cstring>
#include <functional>
#include <sstream>

using namespace dgbar;

struct dgbar_algebra {
    AlgebraPtr ptr;
    std::string source; // kept for diagnostics with line numbers
};

struct dgbar_buf {
    std::string data;
};

namespace {

dgbar_buf* make_buf(std::string s) { return new dgbar_buf{std::move(s)}; }

// First line on which a generator/basis element is declared, for citing
// source locations in validation reports.
int definition_line(const std::string& source, const std::string& name) {
    std::istringstream in(source);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::istringstream ls(line);
        std::string head, nm;
        ls >> head >> nm;
        if ((head == "gen" || head == "basis") && nm == name)
            return no;
    }
    return -1;
}

// Validation witnesses name elements as d(x), aug(y), (a, b); annotate each
// violation with the definition lines of the names it quotes.
std::string annotate_violations(const dgbar_algebra* a, const ValidationReport& rep) {
    std::ostringstream os;
    os << (rep.ok ? "VALID" : "INVALID") << "\n";
    std::vector<std::string> names;
    if (a->ptr->kind() == Algebra::Kind::FreeGC)
        for (const auto& g : a->ptr->gens())
            names.push_back(g.name);
    else
        for (const auto& e : a->ptr->sc_basis())
            names.push_back(e.name);
    for (const auto& s : rep.violations) {
        os << "violation: " << s;
        std::string where;
        for (const auto& nm : names) {
            bool mentioned = false;
            for (const char* pat : {"(", " ", ","}) {
                std::string probe = std::string(pat) + nm;
                auto at = s.find(probe);
                while (at != std::string::npos) {
                    const size_t after = at + probe.size();
                    if (after >= s.size() ||
                        !(std::isalnum(static_cast<unsigned char>(s[after])) || s[after] == '_')) {
                        mentioned = true;
                        break;
                    }
                    at = s.find(probe, at + 1);
                }
                if (mentioned)
                    break;
            }
            if (mentioned) {
                int line = definition_line(a->source, nm);
                if (line > 0)
                    where += (where.empty() ? "" : ", ") + nm + " at line " + std::to_string(line);
            }
        }
        if (!where.empty())
            os << " [" << where << "]";
        os << "\n";
    }
    return os.str();
}

dgbar_status run_guarded(dgbar_buf** out, const std::function<dgbar_status()>& fn) {
    if (out)
        *out = nullptr;
    try {
        return fn();
    } catch (const ParseError& e) {
        if (out)
            *out = make_buf(std::string(e.what()) + "\n");
        return DGBAR_PARSE_ERROR;
    } catch (const MathError& e) {
        if (out)
            *out = make_buf(std::string(e.what()) + "\n");
        return DGBAR_REFUSED;
    } catch (const std::invalid_argument& e) {
        if (out)
            *out = make_buf(std::string(e.what()) + "\n");
        return DGBAR_USAGE_ERROR;
    } catch (const std::exception& e) {
        if (out)
            *out = make_buf(std::string("internal error: ") + e.what() + "\n");
        return DGBAR_USAGE_ERROR;
    }
}

BarOptions make_options(int weight_bound, int cap, int has_window, int lo, int hi, int jobs) {
    BarOptions opt;
    if (weight_bound >= 0 && cap >= 0)
        throw std::invalid_argument("give a weight bound or a wordlength cap, not both");
    if (weight_bound >= 0)
        opt.weight_bound = weight_bound;
    else if (cap >= 0)
        opt.wordlength_cap = cap;
    else
        throw std::invalid_argument("a weight bound or a wordlength cap is required");
    if (has_window)
        opt.window = std::make_pair(lo, hi);
    opt.jobs = jobs > 0 ? jobs : 1;
    return opt;
}

} // namespace

extern "C" {

const char* dgbar_version(void) { return "dgbar 0.1.0"; }

dgbar_status dgbar_algebra_parse(const char* text, size_t len, dgbar_algebra** out,
                                 dgbar_buf** diag) {
    if (out)
        *out = nullptr;
    return run_guarded(diag, [&]() {
        if (!text || !out)
            throw std::invalid_argument("null argument");
        std::string src(text, len);
        AlgebraPtr a = parse_algebra(src);
        *out = new dgbar_algebra{std::move(a), std::move(src)};
        return DGBAR_OK;
    });
}

void dgbar_algebra_free(dgbar_algebra* a) { delete a; }

dgbar_status dgbar_validate(const dgbar_algebra* a, dgbar_buf** report) {
    return run_guarded(report, [&]() {
        if (!a)
            throw std::invalid_argument("null algebra");
        ValidationReport rep = a->ptr->validate();
        if (report)
            *report = make_buf(annotate_violations(a, rep));
        return rep.ok ? DGBAR_OK : DGBAR_REFUSED;
    });
}

dgbar_status dgbar_bar_table(const dgbar_algebra* a, int weight_bound, int cap, int has_window,
                             int window_lo, int window_hi, int jobs, dgbar_buf** out) {
    return run_guarded(out, [&]() {
        if (!a)
            throw std::invalid_argument("null algebra");
        BarOptions opt = make_options(weight_bound, cap, has_window, window_lo, window_hi, jobs);
        BarComplex b = bar_complex(a->ptr, opt);
        Table t = b.cohomology_table(opt.jobs);
        if (out)
            *out = make_buf(serialize_table(t, !b.weighted()));
        return DGBAR_OK;
    });
}

dgbar_status dgbar_cech_table(const dgbar_algebra* a, int level, int weight_bound, int cap,
                              int has_window, int window_lo, int window_hi, int jobs,
                              dgbar_buf** out) {
    return run_guarded(out, [&]() {
        if (!a)
            throw std::invalid_argument("null algebra");
        BarOptions opt = make_options(weight_bound, cap, has_window, window_lo, window_hi, jobs);
        CechLevel c = cech_level(a->ptr, level, opt);
        if (out)
            *out = make_buf(serialize_table(c.table, false));
        return DGBAR_OK;
    });
}

dgbar_status dgbar_truncate_table(const dgbar_algebra* a, int mode, int bound, int weight_bound,
                                  int cap, int has_window, int window_lo, int window_hi,
                                  int jobs, dgbar_buf** out) {
    return run_guarded(out, [&]() {
        if (!a)
            throw std::invalid_argument("null algebra");
        if (mode != 0 && mode != 1)
            throw std::invalid_argument("mode must be 0 (leq) or 1 (geq)");
        BarOptions opt = make_options(weight_bound, cap, has_window, window_lo, window_hi, jobs);
        BarComplex b = bar_complex(a->ptr, opt);
        std::map<int, Complex> pieces;
        for (int w : b.weights()) {
            const Complex& c = b.piece(w);
            if (c.window_empty())
                continue;
            Complex t = mode == 0 ? truncate_leq(c, bound) : truncate_geq(c, bound);
            if (!t.window_empty())
                pieces.emplace(w, std::move(t));
        }
        Table t = table_of(pieces, opt.jobs);
        if (!b.weighted())
            for (auto& row : t)
                row.stable = b.degree_stable(row.degree);
        if (out)
            *out = make_buf(serialize_table(t, !b.weighted()));
        return DGBAR_OK;
    });
}

dgbar_status dgbar_oracle_diff(const dgbar_algebra* a, int levels, int jobs, dgbar_buf** out,
                               int* match) {
    if (match)
        *match = 0;
    return run_guarded(out, [&]() {
        if (!a)
            throw std::invalid_argument("null algebra");
        if (levels < 0)
            throw std::invalid_argument("levels must be >= 0");
        MooreOracle mo = comonadic_oracle(a->ptr, levels);
        BarOptions opt;
        opt.wordlength_cap = levels;
        opt.jobs = jobs > 0 ? jobs : 1;
        BarComplex b = bar_complex(a->ptr, opt);

        auto total = [](const Table& t) {
            std::map<int, int> out_t;
            for (const auto& r : t)
                out_t[r.degree] += r.dim;
            return out_t;
        };
        std::map<int, int> bar_t = total(b.cohomology_table(opt.jobs));
        std::map<int, int> moore_t = cohomology_table(mo.moore);
        std::map<int, int> norm_t = cohomology_table(mo.normalized);

        std::ostringstream os;
        bool agree = true;
        os << "# degree bar moore normalized (honest range only)\n";
        // honest degrees for both models
        for (int n = mo.moore.lo(); n <= mo.moore.hi(); ++n) {
            bool honest = b.degree_stable(n);
            for (int k = n - 1; k <= n + 1; ++k)
                honest = honest && mo.degree_honest(k);
            if (!honest)
                continue;
            int bt = bar_t.count(n) ? bar_t[n] : 0;
            int mt = moore_t.count(n) ? moore_t[n] : 0;
            int nt = norm_t.count(n) ? norm_t[n] : 0;
            os << n << " " << bt << " " << mt << " " << nt << "\n";
            if (bt != mt || mt != nt)
                agree = false;
        }
        os << (agree ? "MATCH" : "MISMATCH") << "\n";
        if (match)
            *match = agree ? 1 : 0;
        if (out)
            *out = make_buf(os.str());
        return DGBAR_OK;
    });
}

dgbar_status dgbar_connectivity(const dgbar_algebra* a, int weight_bound, dgbar_buf** out) {
    return run_guarded(out, [&]() {
        if (!a)
            throw std::invalid_argument("null algebra");
        ConnectivityReport rep = connectivity_check({a->ptr, ""}, weight_bound);
        if (out)
            *out = make_buf(serialize_connectivity(rep));
        return rep.pass ? DGBAR_OK : DGBAR_REFUSED;
    });
}

dgbar_status dgbar_coarse(const dgbar_algebra* a, int weight_bound, int cap, int force,
                          int jobs, dgbar_buf** out) {
    return run_guarded(out, [&]() {
        if (!a)
            throw std::invalid_argument("null algebra");
        std::ostringstream os;
        BarOptions opt = make_options(weight_bound, cap, 0, 0, 0, jobs);
        if (opt.weight_bound) {
            ConnectivityReport conn = connectivity_check({a->ptr, ""}, *opt.weight_bound,
                                                         opt.jobs);
            if (!conn.pass && !force) {
                if (out)
                    *out = make_buf("refused: connectivity gate failed (use force to "
                                    "override)\n" +
                                    serialize_connectivity(conn));
                return DGBAR_REFUSED;
            }
            if (!conn.pass)
                os << "# warning: connectivity gate failed; forced\n";
        }
        BarComplex b = bar_complex(a->ptr, opt);
        HopfAlgebra h = coarse_moduli(b, opt.weight_bound ? *opt.weight_bound : 0);
        os << serialize_hopf(h);
        os << serialize_hopf_report(hopf_validate(h));
        if (out)
            *out = make_buf(os.str());
        return DGBAR_OK;
    });
}

const char* dgbar_buf_data(const dgbar_buf* b) { return b ? b->data.c_str() : ""; }
size_t dgbar_buf_size(const dgbar_buf* b) { return b ? b->data.size() : 0; }
void dgbar_buf_free(dgbar_buf* b) { delete b; }

} // extern "C"

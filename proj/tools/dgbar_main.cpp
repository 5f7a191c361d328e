// dgbar command-line front end. Links only the C API of the shared library;
// argument handling, the result cache, and exit-code policy live here.
//
// Exit codes: 0 success, 1 mathematical refusal / validation failure,
// 2 usage or parse error.

#include "dgbar/dgbar.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

namespace fs = std::filesystem;

namespace {

struct BarArgs {
    std::string file;
    int weight_bound = -1;
    int cap = -1;
    std::string window; // "lo:hi"
    int jobs = 0;       // 0 = hardware default (resolved below)
    bool no_cache = false;
};

int exit_code(dgbar_status s) {
    switch (s) {
    case DGBAR_OK:
        return 0;
    case DGBAR_REFUSED:
        return 1;
    default:
        return 2;
    }
}

std::string take(dgbar_buf* b) {
    std::string s;
    if (b) {
        s.assign(dgbar_buf_data(b), dgbar_buf_size(b));
        dgbar_buf_free(b);
    }
    return s;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool parse_window(const std::string& s, int& lo, int& hi) {
    auto colon = s.find(':');
    if (colon == std::string::npos)
        return false;
    try {
        size_t used = 0;
        lo = std::stoi(s.substr(0, colon), &used);
        if (used != colon)
            return false;
        std::string rest = s.substr(colon + 1);
        hi = std::stoi(rest, &used);
        if (used != rest.size())
            return false;
    } catch (...) {
        return false;
    }
    return lo <= hi;
}

// FNV-1a over the input bytes and the canonical invocation descriptor.
std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

fs::path cache_dir() {
    if (const char* env = std::getenv("DGBAR_CACHE_DIR"))
        return fs::path(env);
    if (const char* home = std::getenv("HOME"))
        return fs::path(home) / ".cache" / "dgbar";
    return fs::path(".dgbar-cache");
}

std::optional<std::string> cache_get(std::uint64_t key) {
    std::ostringstream name;
    name << std::hex << key << ".out";
    return read_file((cache_dir() / name.str()).string());
}

void cache_put(std::uint64_t key, const std::string& value) {
    std::error_code ec;
    fs::create_directories(cache_dir(), ec);
    if (ec)
        return;
    std::ostringstream name;
    name << std::hex << key << ".out";
    fs::path final_path = cache_dir() / name.str();
    fs::path tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            return;
        out << value;
    }
    fs::rename(tmp, final_path, ec);
}

struct Parsed {
    dgbar_algebra* a = nullptr;
    ~Parsed() { dgbar_algebra_free(a); }
};

// Runs a command with caching: the key is the input bytes plus the canonical
// descriptor; only successful results are cached, so hits are byte-identical
// to a fresh run.
int run_cached(const std::string& file, const std::string& descriptor, bool no_cache,
               const std::function<dgbar_status(const std::string&, std::string&)>& compute) {
    auto text = read_file(file);
    if (!text) {
        std::cerr << "error: cannot read '" << file << "'\n";
        return 2;
    }
    const std::uint64_t key = fnv1a(descriptor, fnv1a(*text));
    if (!no_cache) {
        if (auto hit = cache_get(key)) {
            std::cout << *hit;
            return 0;
        }
    }
    std::string out;
    dgbar_status st = compute(*text, out);
    if (st == DGBAR_OK) {
        std::cout << out;
        if (!no_cache)
            cache_put(key, out);
    } else {
        std::cerr << out;
    }
    return exit_code(st);
}

int resolved_jobs(int jobs) {
    if (jobs > 0)
        return jobs;
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void add_bar_options(CLI::App* cmd, BarArgs& args) {
    cmd->add_option("file", args.file, "algebra description file")->required();
    cmd->add_option("--weight-bound", args.weight_bound,
                    "weighted pipeline: compute bidegrees of weight <= W");
    cmd->add_option("--cap", args.cap, "unweighted pipeline: wordlength cap");
    cmd->add_option("--window", args.window, "degree window lo:hi (capped runs)");
    cmd->add_option("--jobs", args.jobs, "worker count (default: hardware)");
    cmd->add_flag("--no-cache", args.no_cache, "bypass the result cache");
}

int window_of(const BarArgs& args, int& lo, int& hi, int& has) {
    has = 0;
    if (!args.window.empty()) {
        if (!parse_window(args.window, lo, hi)) {
            std::cerr << "error: bad --window, expected lo:hi\n";
            return 2;
        }
        has = 1;
    }
    return 0;
}

std::string bar_descriptor(const char* cmd, const BarArgs& args) {
    std::ostringstream os;
    os << cmd << " wb=" << args.weight_bound << " cap=" << args.cap
       << " window=" << args.window;
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bar constructions of augmented dg-algebras over Q, exactly"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dgbar_version()));

    std::string validate_file;
    bool validate_no_cache = false;
    CLI::App* cmd_validate = app.add_subcommand("validate", "check the algebra invariants");
    cmd_validate->add_option("file", validate_file, "algebra description file")->required();
    cmd_validate->add_flag("--no-cache", validate_no_cache, "bypass the result cache");

    BarArgs bar_args;
    bool bar_table_flag = false;
    CLI::App* cmd_bar = app.add_subcommand("bar", "cohomology table of the reduced bar complex");
    add_bar_options(cmd_bar, bar_args);
    cmd_bar->add_flag("--table", bar_table_flag, "emit the table (default output)");

    BarArgs cech_args;
    int cech_level_n = 1;
    CLI::App* cmd_cech = app.add_subcommand("cech", "cohomology table of a Cech nerve level");
    add_bar_options(cmd_cech, cech_args);
    cmd_cech->add_option("--level", cech_level_n, "simplicial level n (>= 0)")->required();

    BarArgs trunc_args;
    int leq_bound = 0, geq_bound = 0;
    CLI::App* cmd_trunc = app.add_subcommand("truncate", "table of the truncated bar complex");
    add_bar_options(cmd_trunc, trunc_args);
    CLI::Option* leq_opt = cmd_trunc->add_option("--leq", leq_bound, "smart truncation tau_{<=n}");
    CLI::Option* geq_opt = cmd_trunc->add_option("--geq", geq_bound, "smart truncation tau_{>=n}");

    std::string oracle_file;
    int oracle_levels = 4;
    int oracle_jobs = 0;
    bool oracle_no_cache = false;
    CLI::App* cmd_oracle =
        app.add_subcommand("oracle", "diff the bar model against the comonadic Moore complex");
    cmd_oracle->add_option("file", oracle_file, "algebra description file")->required();
    cmd_oracle->add_option("--levels", oracle_levels, "simplicial truncation level");
    cmd_oracle->add_option("--jobs", oracle_jobs, "worker count");
    cmd_oracle->add_flag("--no-cache", oracle_no_cache, "bypass the result cache");

    BarArgs coarse_args;
    bool coarse_force = false;
    CLI::App* cmd_coarse =
        app.add_subcommand("coarse", "H^0 Hopf algebra (coarse moduli) presentation");
    add_bar_options(cmd_coarse, coarse_args);
    cmd_coarse->add_flag("--force", coarse_force, "skip the connectivity gate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto with_algebra = [](const std::string& text, std::string& err,
                           dgbar_algebra** out) -> dgbar_status {
        dgbar_buf* diag = nullptr;
        dgbar_status st = dgbar_algebra_parse(text.data(), text.size(), out, &diag);
        if (st != DGBAR_OK)
            err = take(diag);
        return st;
    };

    if (cmd_validate->parsed()) {
        return run_cached(validate_file, "validate", validate_no_cache,
                          [&](const std::string& text, std::string& out) {
                              Parsed p;
                              dgbar_status st = with_algebra(text, out, &p.a);
                              if (st != DGBAR_OK)
                                  return st;
                              dgbar_buf* rep = nullptr;
                              st = dgbar_validate(p.a, &rep);
                              out = take(rep);
                              return st;
                          });
    }

    if (cmd_bar->parsed()) {
        int lo = 0, hi = 0, has = 0;
        if (int rc = window_of(bar_args, lo, hi, has))
            return rc;
        return run_cached(bar_args.file, bar_descriptor("bar", bar_args), bar_args.no_cache,
                          [&](const std::string& text, std::string& out) {
                              Parsed p;
                              dgbar_status st = with_algebra(text, out, &p.a);
                              if (st != DGBAR_OK)
                                  return st;
                              dgbar_buf* buf = nullptr;
                              st = dgbar_bar_table(p.a, bar_args.weight_bound, bar_args.cap, has,
                                                   lo, hi, resolved_jobs(bar_args.jobs), &buf);
                              out = take(buf);
                              return st;
                          });
    }

    if (cmd_cech->parsed()) {
        int lo = 0, hi = 0, has = 0;
        if (int rc = window_of(cech_args, lo, hi, has))
            return rc;
        std::string desc = bar_descriptor("cech", cech_args) + " level=" +
                           std::to_string(cech_level_n);
        return run_cached(cech_args.file, desc, cech_args.no_cache,
                          [&](const std::string& text, std::string& out) {
                              Parsed p;
                              dgbar_status st = with_algebra(text, out, &p.a);
                              if (st != DGBAR_OK)
                                  return st;
                              dgbar_buf* buf = nullptr;
                              st = dgbar_cech_table(p.a, cech_level_n, cech_args.weight_bound,
                                                    cech_args.cap, has, lo, hi,
                                                    resolved_jobs(cech_args.jobs), &buf);
                              out = take(buf);
                              return st;
                          });
    }

    if (cmd_trunc->parsed()) {
        if ((leq_opt->count() == 0) == (geq_opt->count() == 0)) {
            std::cerr << "error: give exactly one of --leq or --geq\n";
            return 2;
        }
        const int mode = leq_opt->count() ? 0 : 1;
        const int bound = mode == 0 ? leq_bound : geq_bound;
        int lo = 0, hi = 0, has = 0;
        if (int rc = window_of(trunc_args, lo, hi, has))
            return rc;
        std::string desc = bar_descriptor("truncate", trunc_args) + " mode=" +
                           std::to_string(mode) + " bound=" + std::to_string(bound);
        return run_cached(trunc_args.file, desc, trunc_args.no_cache,
                          [&](const std::string& text, std::string& out) {
                              Parsed p;
                              dgbar_status st = with_algebra(text, out, &p.a);
                              if (st != DGBAR_OK)
                                  return st;
                              dgbar_buf* buf = nullptr;
                              st = dgbar_truncate_table(p.a, mode, bound,
                                                        trunc_args.weight_bound, trunc_args.cap,
                                                        has, lo, hi,
                                                        resolved_jobs(trunc_args.jobs), &buf);
                              out = take(buf);
                              return st;
                          });
    }

    if (cmd_oracle->parsed()) {
        std::string desc = "oracle levels=" + std::to_string(oracle_levels);
        return run_cached(oracle_file, desc, oracle_no_cache,
                          [&](const std::string& text, std::string& out) {
                              Parsed p;
                              dgbar_status st = with_algebra(text, out, &p.a);
                              if (st != DGBAR_OK)
                                  return st;
                              dgbar_buf* buf = nullptr;
                              int match = 0;
                              st = dgbar_oracle_diff(p.a, oracle_levels,
                                                     resolved_jobs(oracle_jobs), &buf, &match);
                              out = take(buf);
                              if (st == DGBAR_OK && !match)
                                  return DGBAR_REFUSED;
                              return st;
                          });
    }

    if (cmd_coarse->parsed()) {
        std::string desc = bar_descriptor("coarse", coarse_args) + " force=" +
                           std::to_string(coarse_force ? 1 : 0);
        return run_cached(coarse_args.file, desc, coarse_args.no_cache,
                          [&](const std::string& text, std::string& out) {
                              Parsed p;
                              dgbar_status st = with_algebra(text, out, &p.a);
                              if (st != DGBAR_OK)
                                  return st;
                              dgbar_buf* buf = nullptr;
                              st = dgbar_coarse(p.a, coarse_args.weight_bound, coarse_args.cap,
                                                coarse_force ? 1 : 0,
                                                resolved_jobs(coarse_args.jobs), &buf);
                              out = take(buf);
                              return st;
                          });
    }

    return 2;
}

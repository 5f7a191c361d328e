// End-to-end checks of the installed command-line surface: exit codes,
// cache transparency, and byte determinism. argv[1] is the dgbar binary.

#include <cassert>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_tmp;
int g_failures = 0;

void expect(bool cond, const std::string& what) {
    if (!cond) {
        std::cerr << "FAIL: " << what << "\n";
        ++g_failures;
    }
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args, const std::string& cache_dir,
              bool capture_stderr = false) {
    RunResult r;
    std::string cmd = "DGBAR_CACHE_DIR=" + cache_dir + " " + g_cli + " " + args +
                      (capture_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    int status = pclose(p);
    r.exit_code = (status >= 256) ? status / 256 : status;
    return r;
}

std::string fixture(const std::string& name, const std::string& content) {
    fs::path p = g_tmp / name;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f << content;
    return p.string();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-dgbar>\n";
        return 1;
    }
    g_cli = argv[1];
    g_tmp = fs::temp_directory_path() / "dgbar-cli-test";
    fs::remove_all(g_tmp);
    fs::create_directories(g_tmp);
    const std::string cache1 = (g_tmp / "cache1").string();
    const std::string cache2 = (g_tmp / "cache2").string();

    std::string lam = fixture("lam.alg",
                              "algebra lam\nkind freegc\nmixed-tate\ngen e deg 1 wt 1\n");
    std::string dual = fixture("dual.alg",
                               "algebra dual\nkind structconst\nbasis one deg 0\n"
                               "basis x deg 0\nunit one\nmul x x = 0\n");
    std::string broken = fixture("broken.alg", "algebra a\nkind freegc\ngen x deg oops\n");
    std::string empty = fixture("empty.alg", "\n");
    std::string neg = fixture("neg.alg",
                              "algebra neg\nkind freegc\nmixed-tate\ngen t deg -1 wt 1\n");
    // d(x*x) = 0 but (dx)x + x(dx) = 2y: a genuine Leibniz violation
    std::string leibniz_bad = fixture(
        "bad.alg", "algebra bad\nkind structconst\nbasis one deg 0\nbasis x deg 0\n"
                   "basis y deg 1\nunit one\nmul x x = 0\nd x = y\nmul x y = y\n"
                   "mul y x = y\nmul y y = 0\nd y = 0\n");

    // exit codes: valid -> 0, invalid -> 1, parse error -> 2
    expect(run("validate " + lam, cache1).exit_code == 0, "validate valid file");
    expect(run("validate " + broken, cache1).exit_code == 2, "parse error exit code");
    expect(run("validate " + empty, cache1).exit_code == 2, "empty file exit code");

    {
        RunResult r = run("validate " + leibniz_bad, cache1);
        expect(r.exit_code == 1, "validation failure exit code");
        RunResult verbose = run("validate " + leibniz_bad, cache1, true);
        expect(verbose.out.find("Leibniz") != std::string::npos, "Leibniz violation cited");
        expect(verbose.out.find("line") != std::string::npos, "source line cited");
    }

    // fresh vs cached runs are byte-identical; --no-cache agrees too
    {
        std::string args = "bar " + dual + " --cap 5";
        RunResult fresh = run(args, cache1);
        expect(fresh.exit_code == 0, "bar run");
        RunResult cached = run(args, cache1);
        expect(cached.exit_code == 0, "cached bar run");
        expect(cached.out == fresh.out, "cache hit is byte-identical");
        RunResult nocache = run(args + " --no-cache", cache1);
        expect(nocache.out == fresh.out, "--no-cache output matches");
        RunResult other = run(args, cache2);
        expect(other.out == fresh.out, "independent cache dir gives identical bytes");
    }

    // identical invocations from clean caches are byte-identical (determinism)
    {
        std::string args = "coarse " + lam + " --weight-bound 3";
        RunResult a = run(args, (g_tmp / "c3").string());
        RunResult b = run(args, (g_tmp / "c4").string());
        expect(a.exit_code == 0, "coarse run");
        expect(a.out == b.out, "coarse output deterministic");
        // 4 basis lines for W = 3
        int basis_lines = 0;
        size_t pos = 0;
        while ((pos = a.out.find("basis ", pos)) != std::string::npos) {
            ++basis_lines;
            pos += 6;
        }
        expect(basis_lines == 4, "polynomial Hopf on a primitive: 4 basis lines");
    }

    // connectivity refusal without --force, exit 1 and a citation
    {
        RunResult r = run("coarse " + neg + " --weight-bound 3", cache1);
        expect(r.exit_code == 1, "coarse refusal exit code");
        RunResult forced = run("coarse " + neg + " --weight-bound 3 --force", cache1);
        expect(forced.exit_code == 0, "forced coarse run succeeds");
    }

    // oracle MATCH on the dual numbers
    {
        RunResult r = run("oracle " + dual + " --levels 4", cache1);
        expect(r.exit_code == 0, "oracle exit code");
        expect(r.out.find("MATCH") != std::string::npos, "oracle MATCH");
    }

    // refusal propagates a finiteness explanation
    {
        std::string kx0 = fixture("kx0.alg", "algebra kx0\nkind freegc\ngen x deg 0\n");
        RunResult r = run("bar " + kx0 + " --cap 4", cache1);
        expect(r.exit_code == 1, "finiteness refusal exit code");
    }

    if (g_failures == 0)
        std::cout << "test_cli: all checks passed\n";
    return g_failures == 0 ? 0 : 1;
}

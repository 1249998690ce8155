#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("SEMWAVE_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string fixtures_path() {
    const char* p = std::getenv("SEMWAVE_FIXTURES");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run(const std::string& args, const fs::path& workdir) {
    const fs::path out = workdir / "stdout.txt";
    const std::string cmd = "cd '" + workdir.string() + "' && '" + cli_path() + "' " + args +
                            " > '" + out.string() + "' 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    r.stdout_text = buf.str();
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("semwave_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<char> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

} // namespace

TEST_CASE("evolve soliton scenario writes series and snapshot") {
    TempDir dir;
    auto r = run("evolve --init soliton --gamma=-1 --x-min=-20 --x-max 20 --nx 512 "
                 "--dt 1e-3 --steps 500 --record-every 100 --out run",
                 dir.path);
    CHECK(r.exit_code == 0);
    const fs::path out = dir.path / "run";
    CHECK(fs::exists(out / "series.csv"));
    CHECK(fs::exists(out / "final.bin"));
    CHECK(fs::exists(out / "final.json"));
    CHECK(fs::exists(out / "manifest.json"));

    std::ifstream csv(out / "series.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "time,norm,energy,mean_x");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 6); // step 0 plus five recordings
}

TEST_CASE("unknown flag exits 2 with usage text") {
    TempDir dir;
    auto r = run("evolve --definitely-not-a-flag", dir.path);
    CHECK(r.exit_code == 2);
    auto bad = run("frobnicate", dir.path);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("runtime errors exit 1") {
    TempDir dir;
    auto r = run("similarity --embeddings /does/not/exist.jsonl --a x --b y --out o", dir.path);
    CHECK(r.exit_code == 1);
}

TEST_CASE("similarity prints the fixture cosine similarity") {
    TempDir dir;
    const std::string emb = fixtures_path() + std::string("/embeddings.jsonl");
    auto r = run("similarity --embeddings '" + emb + "' --a dog --b cat --out o", dir.path);
    REQUIRE(r.exit_code == 0);
    const double s = std::stod(first_line(r.stdout_text));
    CHECK(s == doctest::Approx(0.15249455576447363).epsilon(1e-12));
    CHECK(fs::exists(dir.path / "o" / "similarity.json"));
    CHECK(fs::exists(dir.path / "o" / "manifest.json"));
}

TEST_CASE("scan ranks the fixture alphabet") {
    TempDir dir;
    const std::string emb = fixtures_path() + std::string("/embeddings.jsonl");
    auto r = run("scan --embeddings '" + emb +
                     "' --target-a dog --target-b cat --alphabet acs --max-len 2 --out o",
                 dir.path);
    REQUIRE(r.exit_code == 0);
    CHECK(first_line(r.stdout_text).substr(0, 3) == "ss ");
}

TEST_CASE("reruns with identical config produce byte-identical data files") {
    TempDir dir;
    const std::string args = "evolve --init gaussian --sigma 1.2 --k0 0.5 --nx 256 "
                             "--dt 1e-3 --steps 300 --record-every 100 --gamma 0.3 --seed 42";
    auto r1 = run(args + " --out run1", dir.path);
    auto r2 = run(args + " --out run2", dir.path);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    for (const char* f : {"series.csv", "final.bin", "final.json", "conservation.json"})
        CHECK(read_bytes(dir.path / "run1" / f) == read_bytes(dir.path / "run2" / f));
}

TEST_CASE("config file drives a run and flags override it") {
    TempDir dir;
    {
        std::ofstream cfg(dir.path / "run.toml");
        cfg << "[evolve]\ninit = \"soliton\"\ngamma = -1.0\nsteps = 100\n"
            << "record-every = 50\nout = \"from_config\"\n";
    }
    auto r = run("evolve --config run.toml", dir.path);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir.path / "from_config" / "series.csv"));

    auto r2 = run("evolve --config run.toml --out overridden", dir.path);
    CHECK(r2.exit_code == 0);
    CHECK(fs::exists(dir.path / "overridden" / "series.csv"));

    {
        std::ofstream cfg(dir.path / "run.json");
        cfg << R"({"evolve": {"init": "soliton", "gamma": -1.0, "steps": 100,)"
            << R"( "record-every": 50, "out": "from_json"}})";
    }
    auto r3 = run("evolve --config run.json", dir.path);
    CHECK(r3.exit_code == 0);
    CHECK(fs::exists(dir.path / "from_json" / "series.csv"));
}

TEST_CASE("manifest records the resolved parameters and seed") {
    TempDir dir;
    auto r = run("greens --dim 3 --r 1.0 --seed 9 --out o", dir.path);
    REQUIRE(r.exit_code == 0);
    auto manifest = read_bytes(dir.path / "o" / "manifest.json");
    const std::string text(manifest.begin(), manifest.end());
    CHECK(text.find("\"subcommand\": \"greens\"") != std::string::npos);
    CHECK(text.find("\"seed\": 9") != std::string::npos);
    CHECK(text.find("\"dim\"") != std::string::npos);
    // 1/(4 pi)
    CHECK(std::stod(first_line(r.stdout_text)) == doctest::Approx(0.07957747154594767));
}

TEST_CASE("interference sweep has the declared column order") {
    TempDir dir;
    auto r = run("interfere --a1 1 --a2 1 --k1 0 --k2 0 --phi2 3.14159265358979312 "
                 "--samples 3 --out o",
                 dir.path);
    REQUIRE(r.exit_code == 0);
    std::ifstream csv(dir.path / "o" / "interference.csv");
    std::string header, row;
    std::getline(csv, header);
    CHECK(header == "x_index,total,direct1,direct2,interference");
    std::getline(csv, row);
    // opposite phases: destructive total ~ 0
    CHECK(std::stod(row.substr(row.find(',') + 1)) == doctest::Approx(0.0));
}

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fsmr/image_io.hpp"
#include "fsmr/patterns.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = FSMR_TEST_DATA;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "stdout.txt";
    const std::string cmd = std::string("\"") + FSMR_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::ostringstream s;
    s << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

struct Dir {
    fs::path path = fs::temp_directory_path() / "fsmr_cli_test";
    Dir() {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~Dir() { fs::remove_all(path); }
    [[nodiscard]] std::string operator/(const std::string& name) const { return "\"" + (path / name).string() + "\""; }
};

const std::string kCrop = "\"" + (kData / "camera_crop64.png").string() + "\"";

}  // namespace

TEST_CASE("corrupt writes image and mask") {
    Dir d;
    const Run r = run("--pattern block --block 8 --block-stride 16 --block-offset 4 corrupt " + kCrop + " " + (d / "c.png") +
                          " --mask-out " + (d / "m.png"),
                      d.path);
    CHECK(r.code == 0);
    CHECK(r.out == "loss_fraction 0.250000\n");
    CHECK(fsmr::read_mask(d.path / "m.png") == fsmr::make_block_mask({64, 64}, 8, 16, 4));
}

TEST_CASE("pipeline with a mask file matches the pattern run") {
    Dir d;
    const std::string common = "--target 48x48 --iterations 20 --pattern line ";
    REQUIRE(run(common + "corrupt " + kCrop + " " + (d / "c.png") + " --mask-out " + (d / "m.png"), d.path).code == 0);
    for (const std::string method : {"lin", "cub", "fsr", "fsmr"}) {
        CHECK(run(common + "--method " + method + " pipeline " + kCrop + " " + (d / "a.png"), d.path).code == 0);
        CHECK(run(common + "--method " + method + " pipeline " + (d / "c.png") + " " + (d / "b.png") + " --mask " + (d / "m.png"),
                  d.path)
                  .code == 0);
        CHECK(fsmr::read_image(d.path / "a.png") == fsmr::read_image(d.path / "b.png"));
    }
}

TEST_CASE("reconstruct, resize and metrics") {
    Dir d;
    CHECK(run("--method cub reconstruct " + kCrop + " " + (d / "r.png"), d.path).code == 0);
    CHECK(fsmr::read_image(d.path / "r.png").size() == fsmr::Size{64, 64});
    CHECK(run("--method fsmr reconstruct " + kCrop + " " + (d / "r.png"), d.path).code == 2);
    CHECK(run("--target 30x20 resize " + kCrop + " " + (d / "s.png") + " --kernel bilinear", d.path).code == 0);
    CHECK(fsmr::read_image(d.path / "s.png").size() == fsmr::Size{30, 20});
    CHECK(run("resize " + kCrop + " " + (d / "s.png") + " --kernel lanczos", d.path).code == 2);
    const Run m = run("metrics " + kCrop + " " + kCrop, d.path);
    CHECK(m.code == 0);
    CHECK(m.out == "psnr_db inf\nssim 1.000000\n");
}

TEST_CASE("accuracy from label files") {
    Dir d;
    {
        std::ofstream p(d.path / "pred.txt"), t(d.path / "truth.txt");
        for (int i = 0; i < 1000; ++i) {
            p << "img" << i << ' ' << (i < 662 ? "cat" : "dog") << '\n';
            t << "cat\n";
        }
    }
    const Run r = run("accuracy " + (d / "pred.txt") + " " + (d / "truth.txt"), d.path);
    CHECK(r.code == 0);
    CHECK(r.out == "correct 662\nincorrect 338\nacc 0.662000\n");
    std::ofstream(d.path / "empty.txt").close();
    CHECK(run("accuracy " + (d / "empty.txt") + " " + (d / "empty.txt"), d.path).code == 2);
}

TEST_CASE("config file with command-line overrides") {
    Dir d;
    std::ofstream(d.path / "cfg.toml") << "method = \"lin\"\npattern = \"none\"\ntarget = \"64x64\"\n";
    // lossless identity-size lin returns the input
    Run r = run("--config " + (d / "cfg.toml") + " pipeline " + kCrop + " " + (d / "o.png"), d.path);
    CHECK(r.code == 0);
    CHECK(r.out.find("psnr_db inf") != std::string::npos);
    r = run("--config " + (d / "cfg.toml") + " --target 32x32 pipeline " + kCrop + " " + (d / "o.png"), d.path);
    CHECK(r.code == 0);
    CHECK(fsmr::read_image(d.path / "o.png").size() == fsmr::Size{32, 32});
}

TEST_CASE("batch writes a report") {
    Dir d;
    fs::create_directories(d.path / "corpus");
    fs::copy_file(kData / "camera_crop64.png", d.path / "corpus" / "crop.png");
    const Run r = run("--target 48x48 --iterations 20 --seed 5 batch " + (d / "corpus") + " " + (d / "out") +
                          " --methods lin fsmr --patterns block rand --no-timing",
                      d.path);
    CHECK(r.code == 0);
    std::ifstream csv(d.path / "out" / "report.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "filename,pattern,method,psnr_db,ssim,ms");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) {
        ++rows;
        CHECK(line.substr(line.size() - 3) == ",NA");
    }
    CHECK(rows == 4);
    CHECK(fs::exists(d.path / "out" / "crop__rand__fsmr.png"));
}

TEST_CASE("exit codes") {
    Dir d;
    CHECK(run("--version", d.path).code == 0);
    CHECK(run("--help", d.path).code == 0);
    CHECK(run("", d.path).code == 2);
    CHECK(run("--frobnicate metrics a b", d.path).code == 2);
    CHECK(run("--method nearest pipeline " + kCrop + " " + (d / "o.png"), d.path).code == 2);
    CHECK(run("--pattern block --block 40 --block-stride 32 pipeline " + kCrop + " " + (d / "o.png"), d.path).code == 2);
    CHECK(run("--threads 0 pipeline " + kCrop + " " + (d / "o.png"), d.path).code == 2);
    CHECK(run("--target 224 pipeline " + kCrop + " " + (d / "o.png"), d.path).code == 2);
    CHECK(run("metrics " + (d / "missing.png") + " " + kCrop, d.path).code == 2);
    CHECK(run("batch " + (d / "nothing") + " " + (d / "out"), d.path).code == 2);

    // every pixel lost
    {
        std::ofstream f(d.path / "dead.pgm", std::ios::binary);
        f << "P5\n64 64\n255\n" << std::string(64 * 64, '\0');
    }
    CHECK(run("pipeline " + kCrop + " " + (d / "o.png") + " --mask " + (d / "dead.pgm"), d.path).code == 3);
}

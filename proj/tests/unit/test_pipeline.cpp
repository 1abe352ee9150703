#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "fsmr/errors.hpp"
#include "fsmr/image_io.hpp"
#include "fsmr/metrics.hpp"
#include "fsmr/pipeline.hpp"

using namespace fsmr;
namespace fs = std::filesystem;

namespace {

Plane random_plane(std::mt19937_64& rng, Size size) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Plane p(size);
    for (auto& v : p.data()) v = u(rng);
    return p;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("fsmr_test_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

PipelineConfig fast_config(Method method) {
    PipelineConfig c = PipelineConfig::for_method(method);
    c.target = {48, 40};
    c.resampler.model.iterations = 20;
    return c;
}

}  // namespace

TEST_CASE("psnr") {
    const Plane a({16, 16}, 0.3);
    CHECK(std::isinf(psnr(a, a)));
    Plane b({16, 16}, 0.3 + 16.0 / 255.0);
    CHECK(psnr(a, b, 1.0) == doctest::Approx(20.0 * std::log10(255.0 / 16.0)).epsilon(1e-12));
    CHECK(psnr(a, b) == doctest::Approx(24.0485).epsilon(1e-5));

    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) {
        const Plane x = random_plane(rng, {23, 17}), y = random_plane(rng, {23, 17});
        CHECK(std::abs(psnr(x, y) - oracle::psnr(x, y)) < 1e-9);
    }
    CHECK_THROWS_AS((void)psnr(a, Plane({16, 15})), InvalidArgument);
}

TEST_CASE("ssim") {
    std::mt19937_64 rng(2);
    const Plane a = random_plane(rng, {20, 14});
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 10; ++i) {
        const Plane x = random_plane(rng, {21, 19});
        Plane y = x;
        for (auto& v : y.data()) v = 0.7 * v + 0.1 * std::uniform_real_distribution<double>(0, 1)(rng);
        const double s = ssim(x, y);
        CHECK(std::abs(s - oracle::ssim(x, y)) < 1e-6);
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }
    CHECK_THROWS_AS((void)ssim(a, Plane({14, 20})), InvalidArgument);
}

TEST_CASE("image metrics use luma") {
    Image a({10, 10}, 3, 0.5);
    Image b = a;
    // a change that cancels in Rec.601 luma
    for (auto& v : b.channel(0).data()) v += 0.114 * 0.1;
    for (auto& v : b.channel(2).data()) v -= 0.299 * 0.1;
    CHECK(psnr(a, b) > 100.0);
    CHECK(std::isinf(psnr(Image({4, 4}, 1, 0.2), Image({4, 4}, 1, 0.2))));
    CHECK_THROWS_AS((void)psnr(a, Image({10, 10}, 1, 0.5)), InvalidArgument);
}

TEST_CASE("accuracy") {
    std::vector<std::string> truth(1000, "cat"), pred(1000, "cat");
    for (int i = 0; i < 338; ++i) pred[static_cast<std::size_t>(i * 2)] = "dog";
    const auto r = accuracy(pred, truth);
    CHECK(r.correct == 662);
    CHECK(r.incorrect == 338);
    CHECK(r.acc() == 0.662);
    CHECK(accuracy(truth, truth).acc() == 1.0);
    CHECK_THROWS_AS((void)accuracy(std::vector<std::string>{}, std::vector<std::string>{}), InvalidArgument);
    CHECK_THROWS_AS((void)accuracy(std::vector<std::string>{"a"}, std::vector<std::string>{"a", "b"}), InvalidArgument);
}

TEST_CASE("method and config plumbing") {
    for (Method m : {Method::lin, Method::cub, Method::fsr, Method::fsmr}) CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS((void)parse_method("nearest"), InvalidArgument);

    CHECK(PipelineConfig::for_method(Method::fsr).resize_kernel->kind == KernelKind::bicubic);
    CHECK(PipelineConfig::for_method(Method::lin).resize_kernel->kind == KernelKind::bilinear);
    CHECK_FALSE(PipelineConfig::for_method(Method::fsmr).resize_kernel.has_value());

    PipelineConfig bad = PipelineConfig::for_method(Method::fsmr);
    bad.resize_kernel = KernelSpec::bicubic();
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = PipelineConfig::for_method(Method::fsr);
    bad.resize_kernel.reset();
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = PipelineConfig::for_method(Method::cub);
    bad.target = {1, 10};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);

    const Image img({8, 8}, 1, 0.5);
    const LossMask m = LossMask::all_valid({8, 8});
    CHECK_THROWS_AS((void)run_sequential(img, m, fast_config(Method::fsmr)), InvalidArgument);
    CHECK_THROWS_AS((void)run_joint(img, m, fast_config(Method::cub)), InvalidArgument);
}

TEST_CASE("lossless identity pipelines return the input") {
    std::mt19937_64 rng(3);
    const Image img({random_plane(rng, {30, 20}), random_plane(rng, {30, 20}), random_plane(rng, {30, 20})});
    for (Method m : {Method::lin, Method::cub, Method::fsr, Method::fsmr}) {
        PipelineConfig c = fast_config(m);
        c.target = img.size();
        c.pattern.kind = PatternKind::none;
        CHECK(run_pipeline(img, c) == img);
    }
}

TEST_CASE("constant images stay constant through every pipeline") {
    const Image img({64, 56}, 3, 0.4);
    for (PatternKind p : {PatternKind::block, PatternKind::line, PatternKind::rand}) {
        for (Method m : {Method::lin, Method::cub, Method::fsr, Method::fsmr}) {
            PipelineConfig c = fast_config(m);
            c.pattern.kind = p;
            const Image out = quantize8(run_pipeline(img, c));
            CHECK(out.size() == c.target);
            for (int ch = 0; ch < 3; ++ch)
                for (double v : out.channel(ch).data()) REQUIRE(v == doctest::Approx(0.4).epsilon(1.0 / 255));
        }
    }
}

TEST_CASE("fsr reconstructs then resizes with bicubic") {
    const Image img = read_image(FSMR_TEST_DATA "/camera_crop64.png");
    PipelineConfig c = fast_config(Method::fsr);
    const LossMask m = make_block_mask(img.size(), 8, 16, 4);
    const Image corrupted = apply_mask(img, m);
    const Image expect = resize(fsr_reconstruct(corrupted, m, c.resampler).image, c.target, KernelSpec::bicubic());
    CHECK(run_sequential(corrupted, m, c) == expect);
}

TEST_CASE("reference image is the bicubic resize of the clean input") {
    const Image img = read_image(FSMR_TEST_DATA "/camera_crop64.png");
    const PipelineConfig c = fast_config(Method::lin);
    CHECK(reference_image(img, c) == resize(img, c.target, KernelSpec::bicubic()));
}

TEST_CASE("number formatting") {
    CHECK(format_number(24.0823996531, 6) == "24.082400");
    CHECK(format_number(std::numeric_limits<double>::infinity(), 6) == "inf");
    CHECK(format_number(std::nan(""), 3) == "nan");
    CHECK(format_number(0.5, 3) == "0.500");
}

TEST_CASE("report csv layout") {
    QualityReport r;
    r.rows.push_back({"a.png", PatternKind::block, Method::fsmr, 30.5, 0.9, std::nullopt});
    r.rows.push_back({"b.png", PatternKind::line, Method::cub, std::numeric_limits<double>::infinity(), 1.0, 12.25});
    std::ostringstream s;
    write_report_csv(s, r);
    CHECK(s.str() ==
          "filename,pattern,method,psnr_db,ssim,ms\n"
          "a.png,block,fsmr,30.500000,0.900000,NA\n"
          "b.png,line,cub,inf,1.000000,12.250\n");
    const auto means = r.means();
    REQUIRE(means.size() == 2);
    CHECK(means[0].psnr == 30.5);
}

TEST_CASE("image files round-trip") {
    TempDir dir("io");
    std::mt19937_64 rng(4);
    const Image rgb = quantize8(Image({random_plane(rng, {13, 7}), random_plane(rng, {13, 7}), random_plane(rng, {13, 7})}));
    const Image gray = quantize8(Image({random_plane(rng, {9, 11})}));
    for (const char* ext : {".png", ".ppm"}) {
        write_image(dir.path / (std::string("rgb") + ext), rgb);
        CHECK(read_image(dir.path / (std::string("rgb") + ext)) == rgb);
    }
    for (const char* ext : {".png", ".pgm"}) {
        write_image(dir.path / (std::string("gray") + ext), gray);
        CHECK(read_image(dir.path / (std::string("gray") + ext)) == gray);
    }
    std::ofstream(dir.path / "ascii.pgm") << "P2\n# comment\n3 2\n255\n0 128 255\n1 2 3\n";
    const Image ascii = read_image(dir.path / "ascii.pgm");
    CHECK(ascii.size() == Size{3, 2});
    CHECK(ascii.channel(0)(2, 0) == 1.0);
    CHECK(ascii.channel(0)(1, 1) == 2.0 / 255.0);

    CHECK_THROWS_AS((void)read_image(dir.path / "missing.png"), IoError);
    CHECK_THROWS_AS(write_image(dir.path / "x.bmp", gray), IoError);
    std::ofstream(dir.path / "junk.png") << "not a png";
    CHECK_THROWS_AS((void)read_image(dir.path / "junk.png"), IoError);
}

TEST_CASE("mask files round-trip") {
    TempDir dir("mask");
    for (const LossMask& m : {make_block_mask({37, 29}, 4, 8, 2), make_rand_mask({64, 3}, 0.5, 9)}) {
        write_mask(dir.path / "m.png", m);
        CHECK(read_mask(dir.path / "m.png") == m);
        write_mask(dir.path / "m.pgm", m);
        CHECK(read_mask(dir.path / "m.pgm") == m);
    }
}

TEST_CASE("batch runs") {
    TempDir corpus("corpus");
    TempDir out("out");

    SUBCASE("empty corpus is rejected") {
        CHECK_THROWS_AS((void)batch_run(corpus.path, fast_config(Method::fsmr), {}, out.path), InvalidArgument);
        CHECK_THROWS_AS((void)batch_run(corpus.path / "nope", fast_config(Method::fsmr), {}, out.path), InvalidArgument);
    }
    SUBCASE("constant image scores inf") {
        write_image(corpus.path / "flat.png", Image({40, 30}, 1, 0.5));
        BatchOptions o;
        o.methods = {Method::cub, Method::fsmr};
        o.patterns = {PatternKind::block, PatternKind::line};
        const auto r = batch_run(corpus.path, fast_config(Method::fsmr), o, out.path);
        REQUIRE(r.rows.size() == 4);
        for (const auto& row : r.rows) {
            CHECK(std::isinf(row.psnr));
            CHECK(row.ssim == doctest::Approx(1.0));
        }
        CHECK(fs::exists(out.path / "flat__block__fsmr.png"));
        CHECK(fs::exists(out.path / "report.csv"));
    }
    SUBCASE("rows are filename-sorted, unreadable files skipped, output reproducible") {
        const Image img = read_image(FSMR_TEST_DATA "/camera_crop64.png");
        write_image(corpus.path / "b.png", img);
        write_image(corpus.path / "a.pgm", img);
        std::ofstream(corpus.path / "broken.png") << "garbage";
        std::ofstream(corpus.path / "notes.txt") << "ignored";
        BatchOptions o;
        o.record_timing = false;
        o.methods = {Method::lin, Method::fsmr};
        PipelineConfig c = fast_config(Method::fsmr);
        const auto r1 = batch_run(corpus.path, c, o, out.path / "one");
        c.resampler.threads = 4;
        const auto r2 = batch_run(corpus.path, c, o, out.path / "four");
        CHECK(r1.skipped == 1);
        REQUIRE(r1.rows.size() == 4);
        CHECK(r1.rows[0].filename == "a.pgm");
        CHECK(r1.rows[3].filename == "b.png");
        CHECK(slurp(out.path / "one" / "report.csv") == slurp(out.path / "four" / "report.csv"));
        CHECK(slurp(out.path / "one" / "b__block__fsmr.png") == slurp(out.path / "four" / "b__block__fsmr.png"));
    }
}

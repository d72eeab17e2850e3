#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "cialab/config.hpp"
#include "cialab/errors.hpp"

#include "helpers.hpp"

using namespace cialab;

TEST_SUITE("config") {

TEST_CASE("defaults validate and pin the lab operating point") {
    const RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.gen_duration_s == 120.0);
    CHECK(cfg.window == 255);
    CHECK(cfg.stride == 0);
    CHECK(cfg.train_fraction == 0.8);
    CHECK(cfg.train.learning_rate == 0.01);
    CHECK(cfg.train.grad_clip == 1.0);
    CHECK(cfg.train.epochs == 12);
    CHECK(cfg.train.optimizer == "adam");
    CHECK(cfg.threshold == 0.5);
    CHECK(cfg.seed == 42);
    CHECK(cfg.sweep_epochs == 3);
    CHECK(cfg.sweep_max_packets == 60000);
    CHECK(cfg.victim_port == 11);
    CHECK(cfg.attacker_port == 5);
    CHECK(cfg.front.camera_id != cfg.left.camera_id);
}

TEST_CASE("the default sweep covers 14 sizes ending at the operating point") {
    const std::vector<int> sizes = default_sweep_sizes();
    REQUIRE(sizes.size() == 14);
    CHECK(sizes.front() == 3);
    CHECK(sizes[12] == 243);
    CHECK(sizes.back() == 255);
    for (std::size_t i = 1; i + 1 < sizes.size(); ++i) {
        CHECK(sizes[i] - sizes[i - 1] == 20);
    }
}

TEST_CASE("the victim defaults to the front camera sink") {
    RunConfig cfg;
    CHECK(cfg.victim_dst() == cfg.front.dst);
    CHECK(cfg.victim_dst().format() == "02:00:00:00:02:01");

    apply_config_value(cfg, "attack.victim_dst", "02:00:00:00:02:02");
    CHECK(cfg.victim_dst().format() == "02:00:00:00:02:02");
    CHECK(cfg.front.dst.format() == "02:00:00:00:02:01");  // profile untouched
}

TEST_CASE("sub-seeds are pairwise distinct") {
    const RunConfig cfg;
    const std::set<std::uint64_t> seeds = {cfg.seed, cfg.gen_seed(), cfg.attack_seed(),
                                           cfg.split_seed(), cfg.train_seed()};
    CHECK(seeds.size() == 5);

    RunConfig other;
    apply_config_value(other, "seed", "7");
    CHECK(other.gen_seed() != cfg.gen_seed());
}

TEST_CASE("apply_config_value reaches every section") {
    RunConfig cfg;
    apply_config_value(cfg, "paths.benign", "x/b.csv");
    apply_config_value(cfg, "paths.attack", "x/a.csv");
    apply_config_value(cfg, "paths.model", "x/m.txt");
    apply_config_value(cfg, "paths.report_dir", "x/reports");
    apply_config_value(cfg, "paths.benign_pcap", "x/b.pcap");
    apply_config_value(cfg, "gen.duration_s", "30.5");
    apply_config_value(cfg, "cam.front.fps", "25");
    apply_config_value(cfg, "cam.front.units", "100:1,200:2");
    apply_config_value(cfg, "cam.left.id", "side");
    apply_config_value(cfg, "attack.victim_port", "9");
    apply_config_value(cfg, "attack.start_s", "1.5");
    apply_config_value(cfg, "attack.end_s", "2.5");
    apply_config_value(cfg, "feature.window", "63");
    apply_config_value(cfg, "feature.stride", "8");
    apply_config_value(cfg, "split.train_fraction", "0.7");
    apply_config_value(cfg, "train.lr", "0.005");
    apply_config_value(cfg, "train.batch", "32");
    apply_config_value(cfg, "train.epochs", "4");
    apply_config_value(cfg, "train.hidden", "16");
    apply_config_value(cfg, "train.clip", "2.0");
    apply_config_value(cfg, "train.optimizer", "sgd");
    apply_config_value(cfg, "train.threads", "2");
    apply_config_value(cfg, "eval.threshold", "0.6");
    apply_config_value(cfg, "sweep.sizes", "3,23");
    apply_config_value(cfg, "sweep.epochs", "2");
    apply_config_value(cfg, "sweep.max_packets", "5000");

    CHECK(cfg.benign_csv == "x/b.csv");
    CHECK(cfg.attack_csv == "x/a.csv");
    CHECK(cfg.model_path == "x/m.txt");
    CHECK(cfg.report_dir == "x/reports");
    CHECK(cfg.benign_pcap == "x/b.pcap");
    CHECK(cfg.gen_duration_s == 30.5);
    CHECK(cfg.front.fps == 25.0);
    REQUIRE(cfg.front.unit_sizes.size() == 2);
    CHECK(cfg.front.unit_sizes[0].size == 100);
    CHECK(cfg.front.unit_sizes[0].weight == 1.0);
    CHECK(cfg.front.unit_sizes[1].size == 200);
    CHECK(cfg.left.camera_id == "side");
    CHECK(cfg.victim_port == 9);
    CHECK(cfg.attack_start_s == 1.5);
    CHECK(cfg.attack_end_s == 2.5);
    CHECK(cfg.window == 63);
    CHECK(cfg.stride == 8);
    CHECK(cfg.train_fraction == 0.7);
    CHECK(cfg.train.learning_rate == 0.005);
    CHECK(cfg.train.batch_size == 32);
    CHECK(cfg.train.epochs == 4);
    CHECK(cfg.train.hidden == 16);
    CHECK(cfg.train.grad_clip == 2.0);
    CHECK(cfg.train.optimizer == "sgd");
    CHECK(cfg.train.threads == 2);
    CHECK(cfg.threshold == 0.6);
    CHECK(cfg.sweep_sizes == std::vector<int>({3, 23}));
    CHECK(cfg.sweep_epochs == 2);
    CHECK(cfg.sweep_max_packets == 5000);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("unknown keys and bad values are rejected") {
    RunConfig cfg;
    CHECK_THROWS_WITH_AS(apply_config_value(cfg, "nope", "1"),
                         "config: unknown key 'nope'", ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "cam.front.bogus", "1"), ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "train.learning_rate", "0.01"), ValidationError);

    CHECK_THROWS_AS(apply_config_value(cfg, "gen.duration_s", "fast"), ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "train.batch", "one"), ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "feature.window", "63x"), ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "cam.front.units", "100"), ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "cam.front.units", ""), ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "attack.victim_dst", "not-a-mac"), ValidationError);
    CHECK_THROWS_AS(apply_config_value(cfg, "sweep.sizes", "3,,23"), ValidationError);
}

TEST_CASE("config files support comments, blanks, and CRLF") {
    testutil::TempDir dir;
    const std::string path = dir.file("lab.cfg");
    testutil::spit(path,
                   "# lab config\n"
                   "\n"
                   "feature.window = 63   # inline comment\r\n"
                   "train.epochs=2\n"
                   "  seed =  9  \n");
    RunConfig cfg;
    load_config_file(cfg, path);
    CHECK(cfg.window == 63);
    CHECK(cfg.train.epochs == 2);
    CHECK(cfg.seed == 9);
}

TEST_CASE("config file syntax errors carry the line number") {
    testutil::TempDir dir;
    const std::string path = dir.file("bad.cfg");
    testutil::spit(path, "feature.window = 63\n\nthis line has no equals\n");
    RunConfig cfg;
    try {
        load_config_file(cfg, path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }

    const std::string noval = dir.file("nokey.cfg");
    testutil::spit(noval, "= 5\n");
    CHECK_THROWS_AS(load_config_file(cfg, noval), ParseError);

    CHECK_THROWS_AS(load_config_file(cfg, dir.file("absent.cfg")), IoError);

    const std::string unknown = dir.file("unknown.cfg");
    testutil::spit(unknown, "no.such.key = 1\n");
    CHECK_THROWS_AS(load_config_file(cfg, unknown), ValidationError);
}

TEST_CASE("make_config applies the file first, then overrides in order") {
    testutil::TempDir dir;
    const std::string path = dir.file("lab.cfg");
    testutil::spit(path, "feature.window = 31\ntrain.hidden = 8\n");

    const RunConfig cfg = make_config(
        path, {{"feature.window", "63"}, {"feature.window", "127"}, {"train.epochs", "1"}});
    CHECK(cfg.window == 127);  // last override wins
    CHECK(cfg.train.hidden == 8);
    CHECK(cfg.train.epochs == 1);

    const RunConfig bare = make_config("", {});
    CHECK(bare.window == 255);
}

TEST_CASE("make_config validates the merged result") {
    CHECK_THROWS_WITH_AS(make_config("", {{"attack.victim_port", "5"}}),
                         "config: attacker and victim ports must differ", ValidationError);
    CHECK_THROWS_AS(make_config("", {{"feature.window", "1"}}), ValidationError);
    CHECK_THROWS_AS(make_config("", {{"split.train_fraction", "1.0"}}), ValidationError);
    CHECK_THROWS_AS(make_config("", {{"eval.threshold", "1.5"}}), ValidationError);
    CHECK_THROWS_AS(make_config("", {{"sweep.sizes", "1,23"}}), ValidationError);
    CHECK_THROWS_AS(make_config("", {{"train.optimizer", "rmsprop"}}), ValidationError);
    CHECK_THROWS_AS(make_config("", {{"feature.stride", "300"}}), ValidationError);
    CHECK_THROWS_AS(make_config("", {{"attack.end_s", "-1"}}), ValidationError);
}

}  // TEST_SUITE

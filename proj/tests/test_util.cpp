#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "xmodal/checkpoint.hpp"
#include "xmodal/config.hpp"
#include "xmodal/hash.hpp"
#include "xmodal/jsonl.hpp"
#include "xmodal/rng.hpp"

using namespace xmodal;

namespace {

std::string temp_path(const char* stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("rng streams are reproducible and state round-trips") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  const std::string state = a.save_state();
  const double expect = a.normal();
  Rng c(0);
  c.load_state(state);
  CHECK(c.normal() == expect);
}

TEST_CASE("uniform_below stays in range and covers small supports") {
  Rng rng(7);
  bool seen[5] = {false, false, false, false, false};
  for (int i = 0; i < 200; ++i) {
    const uint64_t v = rng.uniform_below(5);
    REQUIRE(v < 5);
    seen[v] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("checkpoint container round-trips bitwise") {
  Rng rng(11);
  Checkpoint ck;
  ck.kind = "qformer";
  ck.step = 1234;
  ck.seed = 99;
  ck.config_json = "{\"k\":8}";
  ck.config_hash = hex64(fnv1a64(ck.config_json));
  Tensor w({7, 5});
  rng.fill_normal(w, 0.0, 0.02);
  Tensor b({5});
  rng.fill_normal(b, 0.0, 1.0);
  ck.add("proj.weight", w);
  ck.add("proj.bias", b);

  const std::string path = temp_path("xmodal_ck_test.bin");
  ck.save(path);
  Checkpoint back = Checkpoint::load(path);
  CHECK(back.kind == ck.kind);
  CHECK(back.step == ck.step);
  CHECK(back.seed == ck.seed);
  CHECK(back.config_hash == ck.config_hash);
  REQUIRE(back.arrays.size() == 2);
  CHECK(back.arrays[0].first == "proj.weight");
  CHECK(hash_tensor(back.array("proj.weight")) == hash_tensor(w));
  CHECK(hash_tensor(back.array("proj.bias")) == hash_tensor(b));

  // Saving the loaded copy reproduces the file byte for byte.
  const std::string path2 = temp_path("xmodal_ck_test2.bin");
  back.save(path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("embedding container stores frames with the declared geometry") {
  Rng rng(13);
  EmbeddingFile f;
  f.d_enc = 4;
  f.tokens = 3;
  for (int i = 0; i < 2; ++i) {
    Tensor frame({3, 4});
    rng.fill_normal(frame, 0.0, 1.0);
    f.frames.push_back(frame);
  }
  const std::string path = temp_path("xmodal_emb_test.bin");
  f.save(path);
  EmbeddingFile back = EmbeddingFile::load(path);
  CHECK(back.d_enc == 4);
  CHECK(back.tokens == 3);
  REQUIRE(back.frames.size() == 2);
  CHECK(hash_tensor(back.frames[0]) == hash_tensor(f.frames[0]));
  CHECK(hash_tensor(back.frames[1]) == hash_tensor(f.frames[1]));
  std::remove(path.c_str());
}

TEST_CASE("config parses flat key=value text with repeats and comments") {
  const std::string text =
      "# toy config\n"
      "modality = image\n"
      "dataset = a,caption,path1\n"
      "dataset = b,qa,path2   # trailing comment\n"
      "iterations = 2000\n"
      "peak_lr = 1e-5\n";
  ConfigFile cfg = ConfigFile::parse_text(text);
  CHECK(cfg.get_string("modality") == "image");
  CHECK(cfg.get_int("iterations") == 2000);
  CHECK(cfg.get_real("peak_lr") == doctest::Approx(1e-5));
  CHECK(cfg.get_all("dataset").size() == 2);
  CHECK(cfg.get_all("dataset")[1] == "b,qa,path2");
}

TEST_CASE("config rejects unknown keys by name") {
  ConfigFile cfg = ConfigFile::parse_text("modality = image\niterrations = 5\n");
  CHECK_THROWS_WITH_AS(cfg.require_known_keys({"modality", "iterations"}),
                       doctest::Contains("iterrations"), std::runtime_error);
}

TEST_CASE("config rejects malformed numbers") {
  ConfigFile cfg = ConfigFile::parse_text("iterations = 12x\n");
  CHECK_THROWS_AS(cfg.get_int("iterations"), std::runtime_error);
}

TEST_CASE("jsonl round-trips records in order") {
  std::vector<ojson> records;
  ojson a;
  a["record_id"] = "r1";
  a["target"] = "a red circle";
  records.push_back(a);
  ojson b;
  b["record_id"] = "r2";
  b["target"] = "a blue square";
  records.push_back(b);
  const std::string path = temp_path("xmodal_jsonl_test.jsonl");
  write_jsonl(path, records);
  auto back = read_jsonl(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0]["record_id"] == "r1");
  CHECK(back[1]["target"] == "a blue square");
  std::remove(path.c_str());
}

#include <doctest.h>

#include <algorithm>

#include "guidrift/fusion.hpp"
#include "helpers.hpp"

using namespace guidrift;
using namespace testutil;

namespace {

DetectionBox det(Rect r, Category c = Category::Button, double conf = 1.0,
                 std::optional<std::string> src = std::nullopt) {
  DetectionBox d;
  d.bbox = r;
  d.category = c;
  d.confidence = conf;
  d.source_widget = std::move(src);
  return d;
}

TextBox txt(Rect r, std::string text, double conf = 1.0,
            std::optional<std::string> src = std::nullopt) {
  TextBox t;
  t.bbox = r;
  t.text = std::move(text);
  t.confidence = conf;
  t.source_widget = std::move(src);
  return t;
}

std::vector<Affordance> fuse_invoice() {
  Environment env(invoice_screen(), 1);
  const Observation obs = env.observe();
  const auto dets = detect_widgets(obs, NoiseModel::zero(), Rng(1));
  const auto texts = read_text(obs, NoiseModel::zero(), Rng(2));
  return fuse_frame(dets, texts, FusionConfig{});
}

}  // namespace

TEST_SUITE("fusion") {

TEST_CASE("align pairs by IoU threshold") {
  const std::vector<DetectionBox> ds = {det({100, 100, 40, 20})};
  FusionConfig cfg;

  SUBCASE("strong overlap pairs") {
    const std::vector<TextBox> ts = {txt({100, 100, 40, 16}, "OK")};  // IoU 0.8
    const Alignment al = align(ds, ts, cfg);
    REQUIRE(al.pairs.size() == 1);
    CHECK(al.pairs[0].detection == 0);
    CHECK(al.pairs[0].text == 0);
    CHECK(al.lone_detections.empty());
    CHECK(al.lone_texts.empty());
  }
  SUBCASE("weak, non-contained overlap stays unpaired") {
    const std::vector<TextBox> ts = {txt({130, 100, 40, 20}, "OK")};  // IoU 1/7
    const Alignment al = align(ds, ts, cfg);
    CHECK(al.pairs.empty());
    CHECK(al.lone_detections == std::vector<int>{0});
    CHECK(al.lone_texts == std::vector<int>{0});
  }
}

TEST_CASE("containment pairs inset button text below the IoU bar") {
  // Button-style inset text: IoU 540/1344 ~ 0.40 but fully contained.
  const std::vector<DetectionBox> ds = {det({200, 480, 48, 28})};
  const std::vector<TextBox> ts = {txt({209, 485, 30, 18}, "Submit")};
  const Alignment al = align(ds, ts, FusionConfig{});
  REQUIRE(al.pairs.size() == 1);
}

TEST_CASE("containment is gated by relative area") {
  // A heading inside a page-sized panel must not fuse with it.
  const std::vector<DetectionBox> ds = {det({80, 80, 640, 520}, Category::TextField)};
  const std::vector<TextBox> ts = {txt({100, 100, 160, 24}, "Invoice_Form")};
  const Alignment al = align(ds, ts, FusionConfig{});
  CHECK(al.pairs.empty());
  CHECK(al.lone_detections.size() == 1);
  CHECK(al.lone_texts.size() == 1);
}

TEST_CASE("greedy matching is one-to-one, best overlap first") {
  // One text over two candidate boxes: the tighter box wins, the looser
  // detection is left alone.
  const std::vector<DetectionBox> ds = {det({100, 100, 40, 20}), det({98, 98, 60, 30})};
  const std::vector<TextBox> ts = {txt({102, 102, 36, 16}, "OK")};
  const Alignment al = align(ds, ts, FusionConfig{});
  REQUIRE(al.pairs.size() == 1);
  CHECK(al.pairs[0].detection == 0);
  CHECK(al.lone_detections == std::vector<int>{1});
}

TEST_CASE("arbitrate resolves each provenance") {
  FusionConfig cfg;
  const std::vector<DetectionBox> ds = {det({200, 480, 48, 28}, Category::Button, 0.9, "w1"),
                                        det({10, 10, 30, 30}, Category::TextField, 0.8)};
  const std::vector<TextBox> ts = {txt({209, 485, 30, 18}, "Submit", 0.7, "w1"),
                                   txt({209, 485, 30, 18}, "Version 2.0", 0.7),
                                   txt({500, 500, 40, 12}, "hello", 0.6),
                                   txt({500, 500, 40, 12}, "Delete", 0.6)};

  SUBCASE("fused with lexicon text stays certain") {
    const Affordance a = arbitrate(ds, ts, {0, 0}, cfg);
    CHECK(a.provenance == Provenance::Fused);
    CHECK(a.bbox == Rect{200, 480, 48, 28});  // geometry from vision
    CHECK(a.category == Category::Button);
    CHECK(a.text == "Submit");
    CHECK(a.confidence == 0.7);  // min of the modalities
    CHECK(a.pre_downgrade_confidence == 0.7);
    CHECK_FALSE(a.uncertain);
    CHECK(a.source_widget == "w1");
  }
  SUBCASE("actionable shape with non-actionable words is a conflict") {
    const Affordance a = arbitrate(ds, ts, {0, 1}, cfg);
    CHECK(a.uncertain);
    CHECK(a.confidence == 0.7 * cfg.conflict_downgrade);
    CHECK(a.pre_downgrade_confidence == 0.7);
    CHECK(a.text == "Version 2.0");
  }
  SUBCASE("vision-only button is missing its label") {
    const Affordance a = arbitrate(ds, ts, {0, -1}, cfg);
    CHECK(a.provenance == Provenance::VisionOnly);
    CHECK(a.uncertain);
    CHECK(a.confidence == 0.9 * cfg.conflict_downgrade);
    CHECK_FALSE(a.text.has_value());
  }
  SUBCASE("vision-only field is unremarkable") {
    const Affordance a = arbitrate(ds, ts, {1, -1}, cfg);
    CHECK_FALSE(a.uncertain);
    CHECK(a.confidence == 0.8);
  }
  SUBCASE("text-only prose is static text") {
    const Affordance a = arbitrate(ds, ts, {-1, 2}, cfg);
    CHECK(a.provenance == Provenance::TextOnly);
    CHECK(a.category == Category::StaticText);
    CHECK_FALSE(a.uncertain);
    CHECK(a.confidence == 0.6);
  }
  SUBCASE("text-only actionable word dangles") {
    const Affordance a = arbitrate(ds, ts, {-1, 3}, cfg);
    CHECK(a.uncertain);
    CHECK(a.confidence == 0.6 * cfg.conflict_downgrade);
    CHECK(a.pre_downgrade_confidence == 0.6);
  }
}

TEST_CASE("lexicon overrides change what counts as a conflict") {
  FusionConfig cfg;
  cfg.actionable_lexicon = {"Launch"};
  const std::vector<DetectionBox> ds = {det({100, 100, 40, 20})};
  const std::vector<TextBox> ts = {txt({100, 100, 40, 16}, "Submit")};
  const Affordance a = arbitrate(ds, ts, {0, 0}, cfg);
  CHECK(a.uncertain);  // "Submit" is no longer a known actionable word
}

TEST_CASE("invoice frame fuses into the canonical affordance list") {
  const auto affs = fuse_invoice();
  REQUIRE(affs.size() == 8);
  for (size_t i = 0; i < affs.size(); ++i) CHECK(affs[i].id == "a" + std::to_string(i));

  CHECK(affs[0].provenance == Provenance::VisionOnly);  // the panel
  CHECK(affs[0].category == Category::TextField);
  CHECK(affs[1].text == "Invoice_Form");
  CHECK(affs[1].provenance == Provenance::TextOnly);
  CHECK(affs[2].text == "Invoice #10231");
  CHECK(affs[3].text == "Amount:");
  CHECK(affs[4].text == "1250.00");
  CHECK(affs[4].provenance == Provenance::Fused);
  CHECK(affs[4].category == Category::TextField);
  CHECK(affs[5].text == "Submit");
  CHECK(affs[5].bbox == Rect{200, 480, 48, 28});
  CHECK(affs[6].text == "Cancel");
  CHECK(affs[7].text == "Version 2.0");
  for (const auto& a : affs) {
    CHECK_FALSE(a.uncertain);  // clean screen, lexicon-consistent labels
    CHECK(a.confidence == 1.0);
  }
}

TEST_CASE("fuse_frame is invariant under input permutation") {
  Environment env(invoice_screen(), 1);
  const Observation obs = env.observe();
  auto dets = detect_widgets(obs, NoiseModel::zero(), Rng(1));
  auto texts = read_text(obs, NoiseModel::zero(), Rng(2));

  const auto base = fuse_frame(dets, texts, FusionConfig{});
  std::reverse(dets.begin(), dets.end());
  std::reverse(texts.begin(), texts.end());
  const auto flipped = fuse_frame(dets, texts, FusionConfig{});

  REQUIRE(base.size() == flipped.size());
  for (size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].id == flipped[i].id);
    CHECK(base[i].bbox == flipped[i].bbox);
    CHECK(base[i].text == flipped[i].text);
    CHECK(base[i].provenance == flipped[i].provenance);
    CHECK(base[i].confidence == flipped[i].confidence);
  }
}

TEST_CASE("every input lands in exactly one affordance") {
  Environment env(invoice_screen(), 1);
  const Observation obs = env.observe();
  const auto dets = detect_widgets(obs, NoiseModel::zero(), Rng(1));
  const auto texts = read_text(obs, NoiseModel::zero(), Rng(2));
  const auto affs = fuse_frame(dets, texts, FusionConfig{});

  const size_t fused = static_cast<size_t>(
      std::count_if(affs.begin(), affs.end(),
                    [](const Affordance& a) { return a.provenance == Provenance::Fused; }));
  CHECK(affs.size() == dets.size() + texts.size() - fused);
}

}  // TEST_SUITE

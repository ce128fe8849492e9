#include <doctest.h>

#include <algorithm>
#include <set>

#include "guidrift/perception.hpp"
#include "helpers.hpp"

using namespace guidrift;
using namespace testutil;

namespace {

Observation observe_invoice(uint64_t tag = 1) {
  Environment env(invoice_screen(), tag);
  return env.observe();
}

// True when `got` is `want` after exactly one character dropped or substituted.
bool one_char_corruption(const std::string& want, const std::string& got) {
  if (got == want) return false;
  if (got.size() == want.size()) {
    int diff = 0;
    for (size_t i = 0; i < want.size(); ++i) diff += want[i] != got[i];
    return diff == 1;
  }
  if (got.size() + 1 == want.size()) {
    // got == want with one character erased
    for (size_t i = 0; i < want.size(); ++i) {
      std::string probe = want;
      probe.erase(i, 1);
      if (probe == got) return true;
    }
  }
  return false;
}

}  // namespace

TEST_SUITE("perception") {

TEST_CASE("zero noise detects every non-static widget exactly") {
  const Observation obs = observe_invoice();
  const auto dets = detect_widgets(obs, NoiseModel::zero(), Rng(1));

  REQUIRE(dets.size() == 4);  // panel, amount field, two buttons
  // canonical order: top-to-bottom, left-to-right
  CHECK(dets[0].source_widget == "invoice_form_panel");
  CHECK(dets[1].source_widget == "amount_field");
  CHECK(dets[2].source_widget == "submit_btn");
  CHECK(dets[3].source_widget == "cancel_btn");
  for (const auto& d : dets) CHECK(d.confidence == 1.0);
  CHECK(dets[2].bbox == Rect{200, 480, 48, 28});
  CHECK(dets[2].category == Category::Button);
  CHECK(dets[1].category == Category::TextField);
}

TEST_CASE("zero noise reads every labeled widget exactly") {
  const Observation obs = observe_invoice();
  const auto texts = read_text(obs, NoiseModel::zero(), Rng(1));

  REQUIRE(texts.size() == 7);  // everything but the unlabeled panel
  std::set<std::string> seen;
  for (const auto& t : texts) seen.insert(t.text);
  CHECK(seen == std::set<std::string>{"Invoice_Form", "Invoice #10231", "Amount:", "1250.00",
                                      "Submit", "Cancel", "Version 2.0"});
  for (const auto& t : texts) {
    CHECK(t.confidence == 1.0);
    REQUIRE(t.source_widget.has_value());
  }
  // static text boxes sit exactly on the widget, button text is inset
  const auto title = std::find_if(texts.begin(), texts.end(),
                                  [](const TextBox& t) { return t.text == "Invoice_Form"; });
  REQUIRE(title != texts.end());
  CHECK(title->bbox == Rect{100, 100, 160, 24});
  const auto submit = std::find_if(texts.begin(), texts.end(),
                                   [](const TextBox& t) { return t.text == "Submit"; });
  REQUIRE(submit != texts.end());
  CHECK(submit->bbox == Rect{209, 485, 30, 18});
}

TEST_CASE("label_rect insets interactable widgets by a fifth per side") {
  ObservedItem field;
  field.bbox = {200, 160, 180, 28};
  field.category = Category::TextField;
  CHECK(label_rect(field) == Rect{236, 165, 108, 18});

  ObservedItem text;
  text.bbox = {100, 100, 160, 24};
  text.category = Category::StaticText;
  CHECK(label_rect(text) == Rect{100, 100, 160, 24});

  ObservedItem tiny;
  tiny.bbox = {0, 0, 3, 3};
  tiny.category = Category::Icon;
  CHECK(label_rect(tiny) == Rect{1, 1, 1, 1});  // never collapses to zero
}

TEST_CASE("identical substreams replay identical noisy frames") {
  const Observation obs = observe_invoice();
  const NoiseModel noise = NoiseModel::defaults();

  const auto a = detect_widgets(obs, noise, substream(uint64_t{3}, std::string_view("det")));
  const auto b = detect_widgets(obs, noise, substream(uint64_t{3}, std::string_view("det")));
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].bbox == b[i].bbox);
    CHECK(a[i].confidence == b[i].confidence);
    CHECK(a[i].source_widget == b[i].source_widget);
  }

  const auto ta = read_text(obs, noise, substream(uint64_t{3}, std::string_view("ocr")));
  const auto tb = read_text(obs, noise, substream(uint64_t{3}, std::string_view("ocr")));
  REQUIRE(ta.size() == tb.size());
  for (size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].bbox == tb[i].bbox);
    CHECK(ta[i].text == tb[i].text);
  }
}

TEST_CASE("certain miss with no false positives yields an empty frame") {
  const Observation obs = observe_invoice();
  NoiseModel noise = NoiseModel::zero();
  noise.miss_prob = 1.0;
  CHECK(detect_widgets(obs, noise, Rng(5)).empty());
  CHECK(read_text(obs, noise, Rng(5)).empty());
}

TEST_CASE("spurious boxes are capped in confidence and unsourced") {
  const Observation obs = observe_invoice();
  NoiseModel noise = NoiseModel::zero();
  noise.false_positive_rate = 4.0;

  int spurious = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& d : detect_widgets(obs, noise, Rng(seed))) {
      if (d.source_widget.has_value()) continue;
      ++spurious;
      CHECK(d.confidence <= kFalsePositiveConfidenceCap);
      CHECK(d.bbox.w >= 1);
      CHECK(d.bbox.x + d.bbox.w <= obs.width);
      CHECK(d.bbox.y + d.bbox.h <= obs.height);
    }
  }
  CHECK(spurious > 20);  // mean 4 per frame over 20 frames
}

TEST_CASE("certain misread corrupts exactly one character") {
  const Observation obs = observe_invoice();
  NoiseModel noise = NoiseModel::zero();
  noise.misread_prob = 1.0;

  const auto texts = read_text(obs, noise, Rng(11));
  REQUIRE(texts.size() == 7);
  const Screen truth = invoice_screen();
  for (const auto& t : texts) {
    REQUIRE(t.source_widget.has_value());
    const Widget* src = truth.find(*t.source_widget);
    REQUIRE(src != nullptr);
    CHECK(one_char_corruption(src->label, t.text));
  }
}

TEST_CASE("sample_style crops the dominant widget") {
  const Observation obs = observe_invoice();

  SUBCASE("exact region returns that widget's appearance") {
    const auto style = sample_style(obs, {200, 480, 48, 28});
    REQUIRE(style.has_value());
    CHECK(*style == blue_style());
  }
  SUBCASE("region over the panel samples the panel") {
    const auto style = sample_style(obs, {500, 300, 60, 40});
    REQUIRE(style.has_value());
    CHECK(*style == panel_style());
  }
  SUBCASE("bare background has no appearance") {
    CHECK_FALSE(sample_style(obs, {900, 700, 40, 40}).has_value());
  }
  SUBCASE("overlap ties go to the higher z-order") {
    Screen s;
    s.width = 200;
    s.height = 200;
    s.widgets = {make_widget("low", {10, 10, 50, 50}, Category::Button, "", Effect::Noop,
                             gray_style(), 1),
                 make_widget("high", {10, 10, 50, 50}, Category::Button, "", Effect::Noop,
                             blue_style(), 4)};
    Environment env(s, 1);
    const auto style = sample_style(env.observe(), {10, 10, 50, 50});
    REQUIRE(style.has_value());
    CHECK(*style == blue_style());
  }
}

}  // TEST_SUITE

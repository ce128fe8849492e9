#include <doctest.h>

#include "guidrift/sim_env.hpp"
#include "helpers.hpp"

using namespace guidrift;
using namespace testutil;

TEST_SUITE("environment") {

TEST_CASE("screen validation rejects structural violations") {
  Screen s = invoice_screen();
  CHECK_NOTHROW(s.validate());

  SUBCASE("duplicate widget id") {
    s.widgets.push_back(s.widgets.back());
    CHECK_THROWS_AS(s.validate(), SimError);
  }
  SUBCASE("bbox outside the screen") {
    s.widgets[5].bbox.x = 1270;
    CHECK_THROWS_AS(s.validate(), SimError);
  }
  SUBCASE("non-positive bbox") {
    s.widgets[5].bbox.w = 0;
    CHECK_THROWS_AS(s.validate(), SimError);
  }
  SUBCASE("effect on a static text") {
    s.widgets[1].effect = Effect::Submit;
    CHECK_THROWS_AS(s.validate(), SimError);
  }
  SUBCASE("effect on a text field") {
    s.widgets[4].effect = Effect::Cancel;
    CHECK_THROWS_AS(s.validate(), SimError);
  }
}

TEST_CASE("observe mirrors the screen exactly") {
  const Screen s = invoice_screen();
  Environment env(s, 9);
  const Observation obs = env.observe();
  REQUIRE(obs.items.size() == s.widgets.size());
  CHECK(obs.width == 1280);
  CHECK(obs.height == 960);
  CHECK(obs.revision == 0);
  for (size_t i = 0; i < s.widgets.size(); ++i) {
    CHECK(obs.items[i].id == s.widgets[i].id);
    CHECK(obs.items[i].bbox == s.widgets[i].bbox);
    CHECK(obs.items[i].label == s.widgets[i].label);
    CHECK(obs.items[i].category == s.widgets[i].category);
    CHECK(obs.items[i].enabled == s.widgets[i].enabled);
  }
}

TEST_CASE("hit_test picks the topmost enabled widget") {
  Screen s = invoice_screen();
  Environment env(s, 1);

  SUBCASE("widget over panel by z-order") {
    const Widget* w = env.hit_test({224, 494});
    REQUIRE(w != nullptr);
    CHECK(w->id == "submit_btn");
  }
  SUBCASE("panel where nothing covers it") {
    const Widget* w = env.hit_test({90, 90});
    REQUIRE(w != nullptr);
    CHECK(w->id == "invoice_form_panel");
  }
  SUBCASE("background is nullptr") { CHECK(env.hit_test({5, 5}) == nullptr); }
  SUBCASE("equal z resolves to the larger id") {
    Screen two;
    two.width = 100;
    two.height = 100;
    two.widgets = {make_widget("a", {10, 10, 20, 20}, Category::Button, "A"),
                   make_widget("b", {10, 10, 20, 20}, Category::Button, "B")};
    Environment e2(two, 1);
    CHECK(e2.hit_test({15, 15})->id == "b");
  }
  SUBCASE("disabled widgets are transparent") {
    s.find("submit_btn")->enabled = false;
    Environment e2(s, 1);
    CHECK(e2.hit_test({224, 494})->id == "invoice_form_panel");
  }
}

TEST_CASE("click effects drive record flags and revision") {
  Environment env(invoice_screen(), 3);

  SUBCASE("submit approves and reads as a change") {
    const ActionOutcome out = env.execute(ClickAction{{224, 494}});
    CHECK(out.effect == Effect::Submit);
    CHECK(out.widget_id == "submit_btn");
    CHECK(out.mutated);
    CHECK_FALSE(out.safety_hazard);
    CHECK(env.record_approved());
    CHECK(env.screen().revision == 1);
  }
  SUBCASE("background click does nothing") {
    const ActionOutcome out = env.execute(ClickAction{{5, 5}});
    CHECK(out.effect == Effect::Noop);
    CHECK_FALSE(out.mutated);
    CHECK(env.screen().revision == 0);
  }
  SUBCASE("delete is a safety hazard") {
    Screen s = invoice_screen();
    s.widgets.push_back(make_widget("trap", {500, 480, 48, 28}, Category::Button, "Delete",
                                    Effect::Delete, red_style()));
    Environment e2(s, 3);
    const ActionOutcome out = e2.execute(ClickAction{{524, 494}});
    CHECK(out.safety_hazard);
    CHECK(e2.record_destroyed());
    CHECK_FALSE(e2.record_approved());
  }
  SUBCASE("cancel dismisses modal surfaces") {
    Screen s = invoice_screen();
    s.widgets.push_back(
        make_widget("popup", {400, 300, 300, 200}, Category::Modal, "", Effect::Noop, {}, 5));
    Environment e2(s, 3);
    e2.execute(ClickAction{{324, 494}});  // Cancel
    CHECK(e2.screen().find("popup") == nullptr);
    CHECK(e2.screen().revision == 1);
  }
  SUBCASE("open_modal inserts the popup prototype once") {
    Screen s = invoice_screen();
    s.widgets.push_back(make_widget("help_btn", {600, 480, 48, 28}, Category::Button, "Help",
                                    Effect::OpenModal, gray_style()));
    Environment e2(s, 3);
    e2.set_popup_prototype(
        make_widget("popup", {400, 100, 300, 200}, Category::Modal, "", Effect::Noop, {}, 5));
    e2.execute(ClickAction{{624, 494}});
    CHECK(e2.screen().find("popup") != nullptr);
    const auto n = e2.screen().widgets.size();
    e2.execute(ClickAction{{624, 494}});  // popup sits clear of the button
    CHECK(e2.screen().widgets.size() == n);
  }
}

TEST_CASE("hover reports the behavioral category") {
  Screen s = invoice_screen();
  s.widgets.push_back(make_widget("banner", {100, 560, 160, 32}, Category::Button, "Version 2.0",
                                  Effect::Noop, {0.2, 0.75, 0.7, 0.6, 0.5, 0.3, 0.45, 0.4}, 2));
  s.find("cancel_btn")->enabled = false;
  Environment env(s, 4);

  SUBCASE("live button reads as a button") {
    const ActionOutcome out = env.execute(HoverAction{{224, 494}});
    CHECK(out.hover_category == Category::Button);
    CHECK_FALSE(out.mutated);
  }
  SUBCASE("effect-free button reads as inert decoration") {
    const ActionOutcome out = env.execute(HoverAction{{180, 576}});
    CHECK(out.hover_category == Category::StaticText);
  }
  SUBCASE("disabled widgets are not hit at all") {
    const ActionOutcome out = env.execute(HoverAction{{324, 494}});
    CHECK(out.widget_id == "invoice_form_panel");
    CHECK(out.hover_category == Category::StaticText);
  }
  SUBCASE("background hover has no category") {
    const ActionOutcome out = env.execute(HoverAction{{5, 5}});
    CHECK_FALSE(out.hover_category.has_value());
  }
}

TEST_CASE("typing fills text fields only") {
  Environment env(invoice_screen(), 5);
  const ActionOutcome out = env.execute(TypeAction{"99.00", {290, 174}});
  CHECK(out.mutated);
  CHECK(env.screen().find("amount_field")->label == "99.00");

  const ActionOutcome out2 = env.execute(TypeAction{"x", {224, 494}});  // a button
  CHECK_FALSE(out2.mutated);
  CHECK(env.screen().find("submit_btn")->label == "Submit");
}

TEST_CASE("scroll is an epistemic no-op") {
  Environment env(invoice_screen(), 6);
  const ActionOutcome out = env.execute(ScrollAction{120});
  CHECK_FALSE(out.mutated);
  CHECK(env.screen().revision == 0);
}

TEST_CASE("simulated clock only moves forward") {
  SimClock clock;
  CHECK(clock.now_ms() == 0);
  clock.charge(50);
  clock.charge(10000);
  CHECK(clock.now_ms() == 10050);
  CHECK_THROWS_AS(clock.charge(-1), SimError);
}

TEST_CASE("translate drift moves only its targets") {
  const Screen s = invoice_screen();
  const Screen d = apply_drift(s, TranslateDrift{50, 0, {"submit_btn"}});
  CHECK(d.revision == 1);
  CHECK(d.find("submit_btn")->bbox == Rect{250, 480, 48, 28});
  CHECK(d.find("cancel_btn")->bbox == s.find("cancel_btn")->bbox);
  // the input screen is untouched
  CHECK(s.find("submit_btn")->bbox == Rect{200, 480, 48, 28});
  CHECK(s.revision == 0);
}

TEST_CASE("translate with no targets moves everything") {
  const Screen d = apply_drift(invoice_screen(), TranslateDrift{10, 20, {}});
  CHECK(d.find("form_title")->bbox == Rect{110, 120, 160, 24});
  CHECK(d.find("cancel_btn")->bbox == Rect{310, 500, 48, 28});
}

TEST_CASE("drift failure modes") {
  const Screen s = invoice_screen();
  CHECK_THROWS_AS(apply_drift(s, TranslateDrift{1, 1, {"ghost"}}), DriftTargetMissing);
  CHECK_THROWS_AS(apply_drift(s, TranslateDrift{100000, 0, {"submit_btn"}}), InvalidDrift);
  CHECK_THROWS_AS(apply_drift(s, RestyleDrift{"ghost", {}}), DriftTargetMissing);
  CHECK_THROWS_AS(
      apply_drift(s, InsertTrapDrift{make_widget("submit_btn", {0, 0, 5, 5}, Category::Button)}),
      InvalidDrift);
  CHECK_THROWS_AS(
      apply_drift(s, OpenPopupDrift{make_widget("p", {0, 0, 50, 50}, Category::Button)}),
      InvalidDrift);
}

TEST_CASE("restyle changes appearance only") {
  const Screen d = apply_drift(invoice_screen(), RestyleDrift{"submit_btn", green_style()});
  CHECK(d.find("submit_btn")->style == green_style());
  CHECK(d.find("submit_btn")->bbox == Rect{200, 480, 48, 28});
  CHECK(d.revision == 1);
}

TEST_CASE("insert_trap and open_popup add widgets") {
  const Screen t = apply_drift(
      invoice_screen(),
      InsertTrapDrift{make_widget("trap", {500, 480, 48, 28}, Category::Button, "Delete",
                                  Effect::Delete, red_style())});
  CHECK(t.find("trap") != nullptr);

  const Screen p = apply_drift(
      invoice_screen(),
      OpenPopupDrift{make_widget("popup", {400, 300, 300, 200}, Category::Modal, "Session Expired",
                                 Effect::Noop, {}, 5)});
  CHECK(p.find("popup")->category == Category::Modal);
}

TEST_CASE("composite drift is one revision and atomic") {
  const Screen s = invoice_screen();
  CompositeDrift ok;
  ok.parts = {TranslateDrift{50, 0, {"submit_btn"}}, RestyleDrift{"submit_btn", green_style()}};
  const Screen d = apply_drift(s, ok);
  CHECK(d.revision == 1);  // one mutation, not two
  CHECK(d.find("submit_btn")->bbox == Rect{250, 480, 48, 28});
  CHECK(d.find("submit_btn")->style == green_style());

  CompositeDrift bad;
  bad.parts = {TranslateDrift{50, 0, {"submit_btn"}}, RestyleDrift{"ghost", {}}};
  CHECK_THROWS_AS(apply_drift(s, bad), DriftTargetMissing);
  CHECK(s.find("submit_btn")->bbox == Rect{200, 480, 48, 28});  // nothing leaked
}

TEST_CASE("diff_observations spots widget-level changes") {
  Environment env(invoice_screen(), 7);
  const Observation before = env.observe();

  SUBCASE("no change") {
    const ChangeReport rep = diff_observations(before, env.observe());
    CHECK_FALSE(rep.changed);
    CHECK(rep.changed_ids.empty());
  }
  SUBCASE("label change is detected with its region") {
    env.execute(TypeAction{"77", {290, 174}});
    const ChangeReport rep = diff_observations(before, env.observe());
    CHECK(rep.changed);
    REQUIRE(rep.changed_ids.size() == 1);
    CHECK(rep.changed_ids[0] == "amount_field");
    CHECK(rep.regions[0] == Rect{200, 160, 180, 28});
  }
  SUBCASE("moves report the union region") {
    env.drift(TranslateDrift{50, 0, {"submit_btn"}});
    const ChangeReport rep = diff_observations(before, env.observe());
    REQUIRE(rep.changed_ids.size() == 1);
    CHECK(rep.regions[0] == Rect{200, 480, 98, 28});
  }
  SUBCASE("appearing widgets are changes") {
    env.drift(InsertTrapDrift{make_widget("trap", {500, 480, 48, 28}, Category::Button, "Delete",
                                          Effect::Delete)});
    const ChangeReport rep = diff_observations(before, env.observe());
    REQUIRE(rep.changed_ids.size() == 1);
    CHECK(rep.changed_ids[0] == "trap");
  }
  SUBCASE("a revision bump with no widget delta still reads as change") {
    env.execute(ClickAction{{224, 494}});  // Submit: flag-only mutation
    const ChangeReport rep = diff_observations(before, env.observe());
    CHECK(rep.changed);
    CHECK(rep.changed_ids.empty());
  }
}

TEST_CASE("diff_observations refuses cross-episode comparison") {
  Environment a(invoice_screen(), 1);
  Environment b(invoice_screen(), 2);
  CHECK_THROWS_AS(diff_observations(a.observe(), b.observe()), ObservationMismatch);
}

TEST_CASE("reset_record_flags keeps the drifted screen") {
  Environment env(invoice_screen(), 8);
  env.drift(TranslateDrift{50, 0, {"submit_btn"}});
  env.execute(ClickAction{{274, 494}});
  CHECK(env.record_approved());
  env.reset_record_flags();
  CHECK_FALSE(env.record_approved());
  CHECK(env.screen().find("submit_btn")->bbox == Rect{250, 480, 48, 28});
}

}  // TEST_SUITE

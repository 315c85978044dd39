// Copyright 2026 The reqnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REQNAV_TESTS_TEST_SUPPORT_HPP_
#define REQNAV_TESTS_TEST_SUPPORT_HPP_

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "reqnav/device.hpp"
#include "reqnav/ui_model.hpp"

namespace reqnav::testing {

inline UIElement el(std::initializer_list<std::pair<std::string, std::string>> attrs,
                    std::vector<UIElement> children = {}) {
    UIElement e;
    for (const auto &[k, v] : attrs) {
        e.attrs.emplace(k, v);
    }
    e.children = std::move(children);
    return e;
}

inline UIElement button(const std::string &text) {
    return el({{"class", "android.widget.Button"}, {"text", text}, {"clickable", "true"}});
}

inline UIElement label(const std::string &text) {
    return el({{"class", "android.widget.TextView"}, {"text", text}});
}

inline UIElement screen(const std::string &title, std::vector<UIElement> children) {
    std::vector<UIElement> kids;
    kids.push_back(label(title));
    for (UIElement &c : children) {
        kids.push_back(std::move(c));
    }
    return el({{"class", "android.widget.FrameLayout"}}, std::move(kids));
}

inline Transition click_transition(const std::string &id, const std::string &from,
                                   const Selector &sel, const std::string &to) {
    Transition t;
    t.id = id;
    t.from = from;
    t.selector = sel;
    t.action = Action::click();
    t.to = to;
    return t;
}

/// Three-screen app: home --Setting--> settings --Appearance--> appearance,
/// where the appearance screen carries a clickable "Dark mode" row.
inline AppSpec dark_mode_app() {
    AppSpec app;
    app.app_id = "mini_dark";
    app.initial = "home";
    app.states.emplace("home", UIState(screen("Home", {button("Setting"), button("Feed"),
                                                       button("Profile")}),
                                       "home"));
    app.states.emplace(
        "settings",
        UIState(screen("Settings", {button("Appearance"), button("Notifications")}),
                "settings"));
    UIElement dark_row = el({{"class", "android.widget.Button"},
                             {"text", "Dark mode"},
                             {"resource-id", "dark_mode_row"},
                             {"clickable", "true"}});
    UIElement theme_value = el({{"class", "android.widget.TextView"},
                                {"text", "Theme: Light"},
                                {"resource-id", "theme_value"}});
    app.states.emplace("appearance",
                       UIState(screen("Appearance", {std::move(dark_row), std::move(theme_value)}),
                               "appearance"));
    app.transitions.push_back(
        click_transition("t_home_settings", "home", Selector::by_text("Setting"), "settings"));
    app.transitions.push_back(click_transition("t_settings_appearance", "settings",
                                               Selector::by_text("Appearance"), "appearance"));
    Transition dark = click_transition("t_dark", "appearance",
                                       Selector::by_resource_id("dark_mode_row"), "appearance");
    AttributeEdit edit;
    edit.selector = Selector::by_resource_id("theme_value");
    edit.op = AttributeEdit::Op::kSet;
    edit.key = "text";
    edit.value = "Theme: Dark";
    dark.effects.push_back(std::move(edit));
    app.transitions.push_back(std::move(dark));
    validate_app(app);
    return app;
}

/// settings --Language--> language list --Bengali--> settings with the
/// current-language label updated. `windowed` hides Bengali behind a scroll
/// window of two rows.
inline AppSpec language_app(bool windowed) {
    AppSpec app;
    app.app_id = "mini_lang";
    app.initial = "settings";
    UIElement language_row = el({{"class", "android.widget.Button"},
                                 {"resource-id", "settings_language"},
                                 {"text", "Language"},
                                 {"clickable", "true"}});
    UIElement current = el({{"class", "android.widget.TextView"},
                            {"resource-id", "current_language"},
                            {"text", "Language: English"}});
    app.states.emplace("settings",
                       UIState(screen("Settings", {language_row, current}), "settings"));

    std::vector<UIElement> rows;
    for (const char *name : {"English", "German", "French", "Spanish", "Bengali"}) {
        rows.push_back(el({{"class", "android.widget.Button"},
                           {"text", name},
                           {"clickable", "true"}}));
    }
    UIElement list = el({{"class", "android.widget.ListView"},
                         {"resource-id", "language_rows"},
                         {"scrollable", "true"}},
                        std::move(rows));
    if (windowed) {
        list.attrs["window"] = "0,2";
    }
    app.states.emplace("language_list",
                       UIState(el({{"class", "root"}}, {label("Select language"), list}),
                               "language_list"));

    app.transitions.push_back(click_transition(
        "t_lang", "settings", Selector::by_resource_id("settings_language"), "language_list"));
    Transition pick = click_transition("t_bengali", "language_list",
                                       Selector::by_text("Bengali"), "settings");
    AttributeEdit edit;
    edit.selector = Selector::by_resource_id("current_language");
    edit.op = AttributeEdit::Op::kSet;
    edit.key = "text";
    edit.value = "Language: Bengali";
    pick.effects.push_back(edit);
    app.transitions.push_back(pick);
    validate_app(app);
    return app;
}

/// notes list --Delete note--> confirmation dialog --Confirm--> list without
/// the note. The dialog overlays the list with the background disabled.
inline AppSpec delete_note_app() {
    AppSpec app;
    app.app_id = "mini_notes";
    app.initial = "notes_list";

    auto note_row = [](bool enabled) {
        UIElement del = el({{"class", "android.widget.ImageButton"},
                            {"resource-id", "delete_groceries"},
                            {"content-desc", "Delete note"},
                            {"clickable", "true"}});
        if (!enabled) {
            del.attrs["enabled"] = "false";
        }
        return el({{"class", "android.widget.LinearLayout"}, {"resource-id", "note_row_1"}},
                  {label("Groceries"), del});
    };
    auto list_screen = [&note_row](bool dialog, bool enabled) {
        std::vector<UIElement> kids;
        kids.push_back(label("My notes"));
        kids.push_back(el({{"class", "android.widget.ListView"},
                           {"resource-id", "notes_container"}},
                          {note_row(enabled)}));
        if (dialog) {
            UIElement confirm = el({{"class", "android.widget.Button"},
                                    {"resource-id", "confirm_yes"},
                                    {"text", "Confirm"},
                                    {"content-desc", "Confirm delete"},
                                    {"clickable", "true"}});
            UIElement cancel = el({{"class", "android.widget.Button"},
                                   {"text", "Cancel"},
                                   {"clickable", "true"}});
            kids.push_back(el({{"class", "android.widget.FrameLayout"},
                               {"resource-id", "delete_dialog"}},
                              {label("Delete 'Groceries'?"), confirm, cancel}));
        }
        return el({{"class", "root"}}, std::move(kids));
    };

    app.states.emplace("notes_list", UIState(list_screen(false, true), "notes_list"));
    app.states.emplace("confirm_dialog", UIState(list_screen(true, false), "confirm_dialog"));
    app.states.emplace(
        "notes_after",
        UIState(el({{"class", "root"}},
                   {label("My notes"), el({{"class", "android.widget.ListView"},
                                           {"resource-id", "notes_container"}})}),
                "notes_after"));
    app.transitions.push_back(click_transition("t_delete", "notes_list",
                                               Selector::by_resource_id("delete_groceries"),
                                               "confirm_dialog"));
    app.transitions.push_back(click_transition(
        "t_confirm", "confirm_dialog", Selector::by_resource_id("confirm_yes"), "notes_after"));
    validate_app(app);
    return app;
}

} // namespace reqnav::testing

#endif // REQNAV_TESTS_TEST_SUPPORT_HPP_

/*
 * Copyright 2026 The SDA Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "platform_harness.hpp"
#include "process.hpp"

#include "sda/common/files.hpp"
#include "sda/proto/socket.hpp"

#include <gtest/gtest.h>

using namespace sda;
using namespace sda::testing;
using sda::acceptance::Env;
using sda::acceptance::run;

namespace {

std::string tool(const std::string& name) { return std::string(SDA_TOOLS_DIR) + "/" + name; }

struct Workdir {
    TempDir dir{"cli"};
    Env env{{"SDA_PIN", std::string(kPin)}};

    acceptance::RunResult operator()(const std::string& name, const std::vector<std::string>& args) const {
        return run(tool(name), args, env, dir.path().string());
    }
};

} // namespace

TEST(Cli, HelpExitsZeroAndBadUsageTwo) {
    Workdir w;
    for (const auto* name : {"sdakey", "platform", "defman", "roleman", "scendesk", "wysiwys", "medreg"}) {
        EXPECT_EQ(w(name, {"--help"}).exit_code, 0) << name;
        EXPECT_EQ(w(name, {"--no-such-option"}).exit_code, 2) << name;
    }
}

TEST(Cli, KeygenRefusesToOverwrite) {
    Workdir w;
    auto first = w("sdakey", {"keygen", "--out", "a.ks", "--subject", "A", "--role", "physician", "--kdf", "minimal"});
    ASSERT_EQ(first.exit_code, 0) << first.output;
    EXPECT_EQ(first.output.size(), 65u);  // fingerprint and newline
    auto again = w("sdakey", {"keygen", "--out", "a.ks", "--subject", "A", "--role", "physician", "--kdf", "minimal"});
    EXPECT_EQ(again.exit_code, 2);
    auto show = w("sdakey", {"show", "--keystore", "a.ks"});
    EXPECT_EQ(show.exit_code, 0);
    EXPECT_NE(show.output.find("physician"), std::string::npos);
}

TEST(Cli, WrongPinIsALocalFailure) {
    Workdir w;
    ASSERT_EQ(w("sdakey", {"keygen", "--out", "a.ks", "--subject", "A", "--role", "definer", "--kdf", "minimal"})
                  .exit_code,
              0);
    auto port = proto::Listener("127.0.0.1", 0).port();
    Workdir wrong;
    wrong.env["SDA_PIN"] = "0000";
    auto r = run(tool("defman"), {"--platform", "127.0.0.1:" + std::to_string(port), "--keystore", "a.ks", "list"},
                 wrong.env, w.dir.path().string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find("WRONG_PIN"), std::string::npos) << r.output;
}

TEST(Cli, UnreachablePlatformIsALocalFailure) {
    Workdir w;
    ASSERT_EQ(w("sdakey", {"keygen", "--out", "a.ks", "--subject", "A", "--role", "definer", "--kdf", "minimal"})
                  .exit_code,
              0);
    auto port = proto::Listener("127.0.0.1", 0).port();
    auto r = w("defman", {"--platform", "127.0.0.1:" + std::to_string(port), "--keystore", "a.ks", "list"});
    EXPECT_EQ(r.exit_code, 2) << r.output;
}

TEST(Cli, OfflineDeskCommandsNeverDial) {
    Workdir w;
    auto r = w("medreg", {"checkout", "--offline", "--facade", "http://127.0.0.1:9", "--keystore", "none.ks",
                          "--principal", "dr", "--lightdb", "light.xml"});
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find("OFFLINE"), std::string::npos) << r.output;
}

TEST(Cli, AuditOfAFreshMasterDbIsClean) {
    Workdir w;
    auto r = w("medreg", {"audit", "--db", "master.db"});
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("ok"), std::string::npos);
}

// Copyright 2026 The ESS Authors
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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>

#include "CLI11.hpp"
#include "ess/client/client.h"
#include "json.hpp"

namespace {

std::string MetadataJson(const ess::ObjectMetadata& m) {
  nlohmann::ordered_json j;
  j["name"] = m.name;
  j["size"] = m.size;
  j["version"] = m.version;
  j["sealed"] = m.sealed;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : m.blocks) {
    j["blocks"].push_back({{"index", b.index},
                           {"block_id", b.block_id.value},
                           {"datanode", b.datanode.value},
                           {"address", b.address},
                           {"length", b.length},
                           {"version", b.version},
                           {"lost", b.lost()}});
  }
  return j.dump(2);
}

int Fail(const ess::Status& s) {
  std::cerr << s.ToString() << "\n";
  return s.code() == ess::StatusCode::kNotFound ? 3 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object I/O against the ephemeral block store"};
  app.require_subcommand(1);
  ess::ClientOptions options;
  if (const char* env = std::getenv("ESS_NAMENODE")) options.namenode_address = env;
  app.add_option("--namenode", options.namenode_address,
                 "namenode host:port (default $ESS_NAMENODE)");
  bool idempotent = false;

  std::string name, path = "-";
  auto* put = app.add_subcommand("put", "store a file (or stdin) as an object");
  put->add_option("name", name)->required();
  put->add_option("file", path, "input file, - for stdin");
  auto* get = app.add_subcommand("get", "write an object to a file (or stdout)");
  get->add_option("name", name)->required();
  get->add_option("file", path, "output file, - for stdout");
  auto* del = app.add_subcommand("del", "delete an object");
  del->add_option("name", name)->required();
  del->add_flag("--idempotent", idempotent, "succeed if the object is missing");
  auto* stat = app.add_subcommand("stat", "print object metadata as JSON");
  stat->add_option("name", name)->required();
  CLI11_PARSE(app, argc, argv);

  if (options.namenode_address.empty()) {
    std::cerr << "no namenode: pass --namenode or set ESS_NAMENODE\n";
    return 2;
  }
  options.idempotent_delete = idempotent;
  ess::Client client(options);

  if (*put) {
    std::vector<uint8_t> data;
    if (path == "-") {
      data.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 2;
      }
      data.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto meta = client.PutObject(name, data);
    if (!meta.ok()) return Fail(meta.status());
    std::cout << MetadataJson(meta.value()) << "\n";
  } else if (*get) {
    auto data = client.GetObject(name);
    if (!data.ok()) return Fail(data.status());
    const auto& bytes = data.value();
    if (path == "-") {
      std::cout.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    } else {
      std::ofstream out(path, std::ios::binary);
      out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return 1;
      }
    }
  } else if (*del) {
    ess::Status s = client.DeleteObject(name);
    if (!s.ok()) return Fail(s);
  } else if (*stat) {
    auto meta = client.LookupFresh(name);
    if (!meta.ok()) return Fail(meta.status());
    std::cout << MetadataJson(meta.value()) << "\n";
  }
  return 0;
}

#include "egolayers/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>

#include "egolayers/types.hpp"

namespace egolayers {

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for hashing");

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw InvariantError("sha256 init failed");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);

    std::string out;
    out.reserve(len * 2);
    char hex[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(hex, sizeof(hex), "%02x", digest[i]);
        out += hex;
    }
    return out;
}

void write_manifest(const std::string& output_dir, const std::string& subcommand,
                    const nlohmann::json& config_echo, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["tool"] = "egolayers";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config"] = config_echo;
    nlohmann::json ins = nlohmann::json::array();
    for (const auto& path : inputs) {
        ins.push_back({{"path", path}, {"sha256", sha256_file(path)}});
    }
    j["inputs"] = ins;
    j["outputs"] = outputs;

    const std::string path = output_dir + "/manifest.json";
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest to '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace egolayers

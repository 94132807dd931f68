#include "sqnls/fetch.hpp"

#include <curl/curl.h>
#include <zlib.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>

#include "sqnls/errors.hpp"

namespace fs = std::filesystem;

namespace sqnls {

namespace {

struct DatasetInfo {
  std::string name;
  std::string url;
  std::string filename;  // name of the downloaded payload
  unsigned long crc32 = 0;
};

const std::array<DatasetInfo, 7>& registry() {
  static const std::array<DatasetInfo, 7> entries{{
      {"gisette",
       "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/gisette_scale.bz2",
       "gisette_scale.bz2"},
      {"covtype",
       "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/"
       "covtype.libsvm.binary.scale.bz2",
       "covtype.libsvm.binary.scale.bz2"},
      {"HIGGS",
       "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/HIGGS.bz2",
       "HIGGS.bz2"},
      {"SUSY",
       "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/SUSY.bz2",
       "SUSY.bz2"},
      {"epsilon",
       "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/"
       "epsilon_normalized.bz2",
       "epsilon_normalized.bz2"},
      {"rcv1",
       "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/"
       "rcv1_train.binary.bz2",
       "rcv1_train.binary.bz2"},
      {"url",
       "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/url_combined.bz2",
       "url_combined.bz2"},
  }};
  return entries;
}

void ensure_curl_init() {
  static std::once_flag flag;
  std::call_once(flag, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

std::size_t write_to_file(char* data, std::size_t size, std::size_t nmemb, void* ctx) {
  auto* fp = static_cast<std::FILE*>(ctx);
  return std::fwrite(data, size, nmemb, fp);
}

unsigned long file_crc32(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (fp == nullptr) {
    throw Error("file_crc32: cannot open " + path);
  }
  unsigned long crc = crc32(0L, Z_NULL, 0);
  char buf[1 << 16];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), fp)) > 0) {
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(got));
  }
  std::fclose(fp);
  return crc;
}

bool bzip2_available() {
  return std::system("command -v bzip2 > /dev/null 2>&1") == 0;
}

}  // namespace

std::string dataset_cache_dir() {
  if (const char* env = std::getenv("SQNLS_CACHE_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return std::string(home) + "/.cache/sqnls";
  }
  return ".sqnls-cache";
}

std::vector<std::string> known_datasets() {
  std::vector<std::string> names;
  for (const auto& e : registry()) {
    names.push_back(e.name);
  }
  return names;
}

void fetch_url(const std::string& url, const std::string& dest_path,
               unsigned long expected_crc32) {
  ensure_curl_init();
  const std::string tmp_path = dest_path + ".part";

  std::FILE* fp = std::fopen(tmp_path.c_str(), "wb");
  if (fp == nullptr) {
    throw DownloadFailed("fetch_url: cannot write " + tmp_path);
  }
  CURL* curl = curl_easy_init();
  if (curl == nullptr) {
    std::fclose(fp);
    throw DownloadFailed("fetch_url: curl init failed");
  }
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, write_to_file);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, fp);
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl, CURLOPT_USERAGENT, "sqnls-fetch/0.1");
  const CURLcode rc = curl_easy_perform(curl);
  curl_easy_cleanup(curl);
  std::fclose(fp);

  if (rc != CURLE_OK) {
    fs::remove(tmp_path);
    throw DownloadFailed("fetch_url: " + url + ": " + curl_easy_strerror(rc));
  }
  if (fs::file_size(tmp_path) == 0) {
    fs::remove(tmp_path);
    throw DownloadFailed("fetch_url: " + url + " produced an empty file");
  }
  if (expected_crc32 != 0) {
    const unsigned long got = file_crc32(tmp_path);
    if (got != expected_crc32) {
      std::cerr << "warning: checksum mismatch for " << url << " (expected "
                << expected_crc32 << ", got " << got << ")\n";
    }
  }
  fs::rename(tmp_path, dest_path);
}

std::string fetch_dataset(const std::string& name) {
  const DatasetInfo* info = nullptr;
  for (const auto& e : registry()) {
    if (e.name == name) {
      info = &e;
      break;
    }
  }
  if (info == nullptr) {
    std::string supported;
    for (const auto& e : registry()) {
      supported += (supported.empty() ? "" : ", ") + e.name;
    }
    throw UnknownDataset("fetch_dataset: unknown dataset '" + name +
                         "'; supported: " + supported);
  }

  const fs::path cache = dataset_cache_dir();
  fs::create_directories(cache);

  const bool compressed = info->filename.ends_with(".bz2");
  const fs::path payload = cache / info->filename;
  const fs::path final_path =
      compressed ? cache / info->filename.substr(0, info->filename.size() - 4)
                 : payload;

  if (fs::exists(final_path) && fs::file_size(final_path) > 0) {
    return final_path.string();
  }

  if (!fs::exists(payload) || fs::file_size(payload) == 0) {
    fetch_url(info->url, payload.string(), info->crc32);
  }

  if (compressed) {
    if (!bzip2_available()) {
      std::cerr << "warning: bzip2 not available; " << payload.string()
                << " left compressed\n";
      return payload.string();
    }
    const std::string cmd = "bzip2 -dkf '" + payload.string() + "'";
    if (std::system(cmd.c_str()) != 0) {
      throw DownloadFailed("fetch_dataset: bzip2 failed on " + payload.string());
    }
  }
  if (!fs::exists(final_path) || fs::file_size(final_path) == 0) {
    throw DownloadFailed("fetch_dataset: " + final_path.string() + " is missing or empty");
  }
  return final_path.string();
}

}  // namespace sqnls

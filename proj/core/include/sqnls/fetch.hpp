#pragma once

#include <string>
#include <vector>

namespace sqnls {

/// Cache directory for downloaded datasets: $SQNLS_CACHE_DIR when set,
/// otherwise ~/.cache/sqnls.
std::string dataset_cache_dir();

/// Names accepted by fetch_dataset.
std::vector<std::string> known_datasets();

/// Downloads the named LIBSVM dataset into the cache, decompressing
/// .bz2 payloads through the system bzip2 when available. Idempotent on
/// a cache hit. Throws UnknownDataset / DownloadFailed.
std::string fetch_dataset(const std::string& name);

/// Low-level transfer used by fetch_dataset; `expected_crc32` of zero
/// skips the checksum, a mismatch only warns on stderr.
void fetch_url(const std::string& url, const std::string& dest_path,
               unsigned long expected_crc32 = 0);

}  // namespace sqnls

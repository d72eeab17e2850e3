#pragma once

#include <string>

#include "cialab/capture.hpp"

namespace cialab {

// Canonical capture format: exactly this header line, then one record per
// line, UTF-8, LF line endings.
inline constexpr const char* kCaptureCsvHeader =
    "timestamp_us,src,dst,seq,length,source_id,label";

/**
 * Write the capture as CSV. Only records are persisted; in-memory
 * provenance (seed, spec hash, creation time) is not part of the format.
 */
void write_csv(const CaptureSet& capture, const std::string& path);

/**
 * Read a capture written by write_csv. Validates the header, field ranges
 * (seq 0..255, label 0|1, frame length bounds) and timestamp ordering.
 * The capture's label class is derived from the record labels.
 */
CaptureSet read_csv(const std::string& path);

/**
 * Export as a classic pcap (magic 0xa1b2c3d4, version 2.4, linktype 1).
 * Each record carries incl_len == orig_len == Packet.length and a
 * synthetic Ethernet/IPv4/UDP/application header stack matching the
 * 42+12-byte wire layout, padded with deterministic filler bytes.
 */
void export_pcap(const CaptureSet& capture, const std::string& path);

}  // namespace cialab

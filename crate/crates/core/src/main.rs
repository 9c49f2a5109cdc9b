// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(nic_engine::cli::run(std::env::args_os()));
}

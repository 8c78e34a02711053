// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(deco_cli::run(std::env::args_os()));
}

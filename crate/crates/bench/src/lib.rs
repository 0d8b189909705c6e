// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Criterion benchmarks for `qgd-core` live in `benches/`.

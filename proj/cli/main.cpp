// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
int main() { return 0; }

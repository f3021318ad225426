// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "qgeom/cli.hpp"

int main(int argc, char** argv) { return qgeom::run(argc, argv, std::cout, std::cerr); }

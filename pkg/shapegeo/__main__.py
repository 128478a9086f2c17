# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""``python -m shapegeo``"""
import sys

from shapegeo.cli import main

sys.exit(main())

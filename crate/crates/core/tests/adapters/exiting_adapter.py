#!/usr/bin/env python3
import sys

sys.stdin.readline()
sys.exit(3)

#!/usr/bin/env python3
"""
Entry point for SLAM Booster.

    python main.py simulate --suite room --out data/room
    python main.py run --dataset data/room --set controller.strategy=pid
    python main.py eval runs/room_pid/trajectory.txt data/room/groundtruth.txt
    python main.py sweep --dataset data/room --knob csr
"""
import os
import sys

# Add project root to path to resolve imports if this script is run directly
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from slam_booster.cli import main  # noqa: E402

if __name__ == "__main__":
    main()

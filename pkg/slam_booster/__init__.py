"""
SLAM Booster - online approximation control for desk-scale dense SLAM.

The package bundles a KinectFusion-style pipeline with every approximation
knob exposed, an online controller that picks knob settings frame by frame,
a synthetic ground-truth simulator and an evaluation harness.

Usage:
    from slam_booster.storage.dataset import read_dataset
    from slam_booster.core.runner import BoosterRunner

    dataset = read_dataset("datasets/room")
    result = BoosterRunner(run_config).run(dataset)
    print(result.report.ate_m)
"""

__version__ = "1.0.0"

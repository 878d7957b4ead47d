"""
Soft, hard and temporal consistency on whole tracks
===================================================
"""

import numpy as np

from pedeval.metrics_instance import InstanceSeries, confidence_delta, hard_prediction, instance_report, soft_prediction

# a steady pedestrian and a flickering one, both crossing (class 1)
steady = InstanceSeries("steady", 1, (0, 10, 20), np.array([[0.2, 0.8], [0.25, 0.75], [0.2, 0.8]]))
flicker = InstanceSeries("flicker", 1, (0, 10, 20), np.array([[0.1, 0.9], [0.6, 0.4], [0.2, 0.8]]))

for s in (steady, flicker):
    soft, mean = soft_prediction(s)
    print(s.ped_id, "soft", soft, np.round(mean, 3), "hard", hard_prediction(s), "delta", confidence_delta(s, 1))

# the flicker keeps its soft label but the hard view calls it a miss
print(instance_report([steady, flicker]))

"""Pipeline orchestration: datasets, training, the session tick loop, tasks, evaluation."""

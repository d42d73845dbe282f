// intentionally empty: this package only carries the benchmark targets

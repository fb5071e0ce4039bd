"""Display geometry and the eye/head gaze model."""

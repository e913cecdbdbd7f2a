"""Deterministic motion-cueing simulation toolkit.

The C++ core exposes pedal conditioning, vehicle dynamics, the cueing
algorithm, platform kinematics, the frame pipelines, the nine-turn test
track, and end-to-end scenario runs.
"""

from ._core import (  # noqa: F401
    TELEMETRY_SCHEMA_VERSION,
    BodyAccel,
    ConditionedCommand,
    CueGains,
    CueTarget,
    CueingParams,
    CueingState,
    DriverInput,
    FrameRecord,
    Gear,
    HapticCalibration,
    HapticCue,
    HighPassState,
    LatencyReport,
    MotorAngles,
    PedalFilterParams,
    PedalFilterState,
    PipelineMode,
    PlatformLimits,
    PlatformPose,
    RollSource,
    SchedulerConfig,
    ServoParams,
    ServoState,
    TiltCue,
    Track,
    TrackParams,
    TrackSample,
    ValidationError,
    Vec3,
    VehicleParams,
    VehicleState,
    YawWashoutState,
    accel_by_differencing,
    apply_servo_shaping,
    build_track,
    centripetal_accel,
    clamp_pose,
    compare_pipelines,
    compose_cue_frame,
    condition_pedals,
    constant_trace,
    default_config,
    export_track,
    fixed_update_steps,
    forward_kinematics,
    haptic_cue,
    high_pass_step,
    inverse_kinematics,
    jittered_trace,
    latency_report,
    low_pass_step,
    rate_limit_step,
    run_pipeline,
    run_scenario,
    sample_track,
    step_vehicle,
    tilt_cues,
    yaw_washout_step,
)

__version__ = "0.1.0"

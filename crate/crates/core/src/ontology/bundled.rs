//! The bundled turbine knowledge-graph manifest.
//!
//! Node families and relationship counts reproduce the published catalogue
//! shape (537 nodes, 1059 relationships across 9 relationship types). All
//! entries that are not documented ground truth carry `placeholder: true`
//! and "(placeholder)" text so they are never mistaken for real maintenance
//! guidance; they exist to preserve the graph shape and cardinalities.

use super::*;

const IMAGE_HOST: &str = "https://example.org/images_maintenance";

/// The twelve SCADA features used by the desk-scale anomaly classifier;
/// every name resolves to a Feature node in the bundled graph.
pub const DESK_FEATURES: [&str; 12] = [
    "GearBoxTemperature_DegC_Mean",
    "GearBoxTemperature_DegC_Max",
    "GBoxOpShaftBearingTemp1_Stdev",
    "Pitch_Deg_Max",
    "Pitch_Deg_Mean",
    "WindSpeed_mps_Mean",
    "AbsoluteWindDirection_Deg_Mean",
    "YawError_Deg_Mean",
    "Power_kW_Stdev",
    "ReactivePower_kVAr_Max",
    "GenBearingtemp2_Mean",
    "NacInsidetemp_Min",
];

fn strs(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn subsystems() -> Vec<SubsystemEntry> {
    let plain = |label: &str, name: &str| SubsystemEntry {
        label: label.into(),
        name: name.into(),
        properties: BTreeMap::new(),
        placeholder: false,
    };
    let mut list = vec![
        plain("Blades", "Blades"),
        plain("PitchSystem", "Pitch System"),
        plain("Yaw", "Yaw System"),
        plain("Gearbox", "Gearbox"),
        plain("Generator", "Generator"),
    ];
    let mut transformer = plain("Transformer", "Transformer");
    transformer.properties.insert(
        "image_url".into(),
        PropertyValue::TextList(vec![format!("{IMAGE_HOST}/Transformer_Diagram.png")]),
    );
    transformer.properties.insert(
        "CorrectiveActivities".into(),
        PropertyValue::TextList(strs(&[
            "The transformer could have two different corrective maintenance operations: \
             1. Replacement in case of failure. 2. Centering coils in case moves are observed. \
             The procedure of centering coils is made in order to maintain the same distance \
             between the three phases and to check that LV and HV coils are concentric.",
            "In order to do that procedure it is necessary to ground the transformer and to \
             lock some disconnections in accordance with the instruction manual consignment.",
        ])),
    );
    list.push(transformer);
    list.push(plain("Converter", "Converter"));
    list.push(plain("HydraulicSystem", "Hydraulic System"));
    list.push(plain("ESC", "Electric, Sensor & Control"));
    list.push(plain("DriveTrain", "Drive Train"));
    list.push(plain("FCS", "Foundation & Concrete Section"));
    list
}

fn components() -> Vec<ComponentEntry> {
    let entry = |label: &str, name: &str, placeholder: bool| ComponentEntry {
        label: label.into(),
        name: name.into(),
        placeholder,
    };
    vec![
        entry("Environment", "Environment", false),
        entry("CommNetwork", "Communications & Network", false),
        entry("ParkBrake", "Park Brake", false),
        entry("MainShaft", "Main Shaft", false),
        entry("PowerCabinet", "Power Cabinet", false),
        entry("GLLP", "Ground Line & Lightning Protection", false),
        entry("Nacelle", "Nacelle", true),
        entry("Rotor", "Rotor", true),
        entry("Hub", "Hub", true),
        entry("Tower", "Tower", true),
        entry("Anemometer", "Anemometer", true),
        entry("WindVane", "Wind Vane", true),
        entry("MeteoStation", "Meteorological Station", true),
        entry("CoolingSystem", "Cooling System", true),
        entry("LubricationSystem", "Lubrication System", true),
        entry("SlipRing", "Slip Ring", true),
        entry("YawMotor", "Yaw Motor", true),
        entry("Elevator", "Service Elevator", true),
    ]
}

fn functional_groups() -> Vec<FunctionalGroupEntry> {
    let entry = |key: Option<&str>, label: &str, name: &str, fno: i64| FunctionalGroupEntry {
        key: key.map(str::to_string),
        label: label.into(),
        name: name.into(),
        fno,
        placeholder: false,
    };
    vec![
        entry(None, "IPR", "IPR", 0),
        entry(None, "Pitch", "Pitch System", 1),
        entry(None, "PitchInterfaceAlarm", "Pitch System Interface Alarms", 2),
        entry(None, "PitchEFCMon", "Pitch System EFC Monitoring", 3),
        entry(None, "PCS", "Power Conditioning System", 4),
        entry(None, "PPD", "Partial Performance Degraded", 5),
        entry(Some("YawFG"), "Yaw", "Yaw System", 6),
        entry(None, "HydraulicSys", "Hydraulic System", 7),
        entry(None, "WindAlr", "Wind Condition Alarms", 8),
        entry(Some("GearboxFG"), "Gearbox", "Gearbox", 9),
        entry(None, "MVTR", "Moisture Vapour Transmission Rate", 10),
        entry(None, "Test", "Test Rig", 11),
        entry(None, "YawBrake", "Yaw Brake", 12),
        entry(None, "NoFault", "No Fault", 13),
    ]
}

struct NamedFeature {
    name: &'static str,
    description: &'static str,
    unit: &'static str,
    feature_no: Option<i64>,
    placeholder: bool,
    fault_events: &'static [usize],
}

const NAMED_FEATURES: [NamedFeature; 15] = [
    NamedFeature {
        name: "GearBoxTemperature_DegC_Mean",
        description: "Gearbox Oil Sump Temperature Mean Value",
        unit: "deg celsius",
        feature_no: Some(51),
        placeholder: false,
        fault_events: &[25, 37],
    },
    NamedFeature {
        name: "GearBoxTemperature_DegC_Max",
        description: "Gearbox Oil Sump Temperature Maximum Value",
        unit: "deg celsius",
        feature_no: None,
        placeholder: false,
        fault_events: &[25],
    },
    NamedFeature {
        name: "GBoxOpShaftBearingTemp1_Stdev",
        description: "Gearbox Bearing 1 Temperature Standard Deviation",
        unit: "Deg celsius",
        feature_no: None,
        placeholder: false,
        fault_events: &[24],
    },
    NamedFeature {
        name: "GBoxOpShaftBearingTemp2_Stdev",
        description: "Gearbox Bearing 2 Temperature Standard Deviation",
        unit: "Deg celsius",
        feature_no: Some(46),
        placeholder: false,
        fault_events: &[24],
    },
    NamedFeature {
        name: "Pitch_Deg_Max",
        description: "Pitch Angle Maximum Value",
        unit: "Deg",
        feature_no: Some(2),
        placeholder: false,
        fault_events: &[45, 44, 43],
    },
    NamedFeature {
        name: "Pitch_Deg_Mean",
        description: "Pitch Angle Mean Value",
        unit: "Deg",
        feature_no: None,
        placeholder: true,
        fault_events: &[45],
    },
    NamedFeature {
        name: "GenBearingtemp2_Mean",
        description: "Generator Bearing 2 Temperature Mean Value",
        unit: "Deg celsius",
        feature_no: None,
        placeholder: false,
        fault_events: &[26],
    },
    NamedFeature {
        name: "GenStatortemp2_Mean",
        description: "Generator Stator Temperature Mean Value",
        unit: "Deg celsius",
        feature_no: None,
        placeholder: false,
        fault_events: &[30],
    },
    NamedFeature {
        name: "GenHeWaterInlettemp_Stdev",
        description: "Generator Inlet Temperature Standard Deviation",
        unit: "Deg celsius",
        feature_no: None,
        placeholder: false,
        fault_events: &[31],
    },
    NamedFeature {
        name: "NacInsidetemp_Min",
        description: "Nacelle Temperature Minimum Value",
        unit: "Deg celsius",
        feature_no: None,
        placeholder: false,
        fault_events: &[32],
    },
    NamedFeature {
        name: "WindSpeed_mps_Mean",
        description: "Average Wind Speed Mean Value",
        unit: "m/s",
        feature_no: None,
        placeholder: false,
        fault_events: &[40],
    },
    NamedFeature {
        name: "AbsoluteWindDirection_Deg_Mean",
        description: "Absolute Wind Direction Mean Value",
        unit: "Deg",
        feature_no: None,
        placeholder: true,
        fault_events: &[2],
    },
    NamedFeature {
        name: "YawError_Deg_Mean",
        description: "Yaw Error Mean Value",
        unit: "Deg",
        feature_no: None,
        placeholder: true,
        fault_events: &[2],
    },
    // No fault-event mapping: active power is an aggregate of other features,
    // which is what drives the report fallback path.
    NamedFeature {
        name: "Power_kW_Stdev",
        description: "Active Power Standard Deviation",
        unit: "kW",
        feature_no: None,
        placeholder: false,
        fault_events: &[],
    },
    NamedFeature {
        name: "ReactivePower_kVAr_Max",
        description: "Reactive Power Maximum Value",
        unit: "kVAr",
        feature_no: None,
        placeholder: false,
        fault_events: &[50],
    },
];

const FEATURE_BASES: [(&str, &str, &str); 23] = [
    ("RotorSpeed_rpm", "Rotor Speed", "rpm"),
    ("GenSpeed_rpm", "Generator Speed", "rpm"),
    ("Power_kW", "Active Power", "kW"),
    ("ReactivePower_kVAr", "Reactive Power", "kVAr"),
    ("WindSpeed_mps", "Average Wind Speed", "m/s"),
    ("AmbientTemp_DegC", "Ambient Temperature", "Deg celsius"),
    ("GenBearingtemp1", "Generator Bearing 1 Temperature", "Deg celsius"),
    ("GenStatortemp1", "Generator Stator Temperature 1", "Deg celsius"),
    ("GenRotortemp", "Generator Rotor Temperature", "Deg celsius"),
    ("HydraulicOilPressure_bar", "Hydraulic Oil Pressure", "bar"),
    ("HydraulicOilTemp_DegC", "Hydraulic Oil Temperature", "Deg celsius"),
    ("GearOilPressure_bar", "Gearbox Oil Pressure", "bar"),
    ("GearOilLevel_pct", "Gearbox Oil Level", "%"),
    ("TowerVibrationX_mm", "Tower Vibration X", "mm"),
    ("TowerVibrationY_mm", "Tower Vibration Y", "mm"),
    ("NacelleVibration_mm", "Nacelle Vibration", "mm"),
    ("ConverterTemp_DegC", "Converter Temperature", "Deg celsius"),
    ("TransformerTemp_DegC", "Transformer Temperature", "Deg celsius"),
    ("GridVoltage_V", "Grid Voltage", "V"),
    ("GridFrequency_Hz", "Grid Frequency", "Hz"),
    ("CableTwist_Deg", "Cable Twist", "Deg"),
    ("BladeLoadA_kNm", "Blade A Root Load", "kNm"),
    ("BladeLoadB_kNm", "Blade B Root Load", "kNm"),
];

const FEATURE_STATS: [(&str, &str); 4] = [
    ("Mean", "Mean Value"),
    ("Max", "Maximum Value"),
    ("Min", "Minimum Value"),
    ("Stdev", "Standard Deviation"),
];

/// Generated feature names (87 of them) that fill the catalogue to 102.
fn generated_feature_names() -> Vec<(String, String, String)> {
    let named: HashSet<&str> = NAMED_FEATURES.iter().map(|f| f.name).collect();
    let mut out = Vec::new();
    for (base, readable, unit) in FEATURE_BASES {
        for (stat, stat_readable) in FEATURE_STATS {
            let name = format!("{base}_{stat}");
            if named.contains(name.as_str()) {
                continue;
            }
            out.push((name, format!("{readable} {stat_readable}"), unit.to_string()));
            if out.len() + NAMED_FEATURES.len() == FEATURE_COUNT {
                return out;
            }
        }
    }
    out
}

fn features() -> Vec<FeatureEntry> {
    let reserved: HashSet<i64> =
        NAMED_FEATURES.iter().filter_map(|f| f.feature_no).collect();
    let mut pool = (0..FEATURE_COUNT as i64).filter(|n| !reserved.contains(n));
    let mut out = Vec::with_capacity(FEATURE_COUNT);
    for named in &NAMED_FEATURES {
        out.push(FeatureEntry {
            name: named.name.into(),
            description: named.description.into(),
            unit: named.unit.into(),
            feature_no: named.feature_no.unwrap_or_else(|| pool.next().expect("pool")),
            placeholder: named.placeholder,
        });
    }
    for (name, description, unit) in generated_feature_names() {
        out.push(FeatureEntry {
            name,
            description,
            unit,
            feature_no: pool.next().expect("pool"),
            placeholder: true,
        });
    }
    out
}

fn alarms() -> Vec<AlarmEntry> {
    let pinned: [(usize, &str); 5] = [
        (1, "Generator winding temperature alarm"),
        (2, "Yaw Error > Max Start Yaw Error"),
        (3, "Gearbox oil pressure out of range (placeholder)"),
        (4, "Blade 1 too slow to respond"),
        (5, "Pitch Heartbeat Error"),
    ];
    (1..=ALARM_COUNT)
        .map(|i| {
            let (description, placeholder) = match pinned.iter().find(|(k, _)| *k == i) {
                Some((_, d)) => (d.to_string(), i == 3),
                None => (format!("Operational alarm {} (placeholder)", 900 + i), true),
            };
            AlarmEntry {
                label: format!("Alarm{i}"),
                description,
                alarm_no: format!("{}", 900 + i),
                placeholder,
            }
        })
        .collect()
}

fn fault_event_details(k: usize) -> (&'static str, bool) {
    match k {
        1 => ("Twist sensor fail", false),
        2 => ("Very high wind direction misalignment", false),
        24 => ("High temperature on the gearbox bearing", false),
        25 => ("High temperature on the gearbox oil", false),
        26 => ("High temperature on bearings (DE or NDE)", false),
        30 => ("IGBT high temperatures", false),
        31 => ("High temperature on generator's slipring", false),
        32 => ("High or Low nacelle temperature", false),
        37 => ("Temperature switch of the gearbox pump", false),
        40 => ("High wind speed", false),
        43 => ("Pitch Activation Error", false),
        44 => ("Possible existence of ice on blades", false),
        45 => ("Blade Position Error", false),
        50 => ("Grid problems", false),
        _ => ("", true),
    }
}

fn fault_events() -> Vec<FaultEventEntry> {
    (1..=FAULT_EVENT_COUNT)
        .map(|k| {
            let (details, placeholder) = fault_event_details(k);
            FaultEventEntry {
                label: format!("FaultEvent{k}"),
                details: if placeholder {
                    format!("Fault condition F{k} (placeholder)")
                } else {
                    details.to_string()
                },
                placeholder,
            }
        })
        .collect()
}

struct PinnedPreventive {
    act: usize,
    details: &'static str,
    activities: &'static [&'static str],
    gen_periodicity: Option<&'static str>,
    target: &'static str,
}

const PINNED_PREVENTIVE: [PinnedPreventive; 12] = [
    PinnedPreventive {
        act: 60,
        details: "Pitch re-tightening",
        activities: &["Re-tightening of the pitch system bolted joints to the specified torque."],
        gen_periodicity: Some("12 months"),
        target: "PitchSystem",
    },
    PinnedPreventive {
        act: 61,
        details: "Pitch calibration",
        activities: &["Calibration of the blade pitch angle reference against the mechanical zero."],
        gen_periodicity: Some("12 months"),
        target: "PitchSystem",
    },
    PinnedPreventive {
        act: 62,
        details: "Batteries substitution",
        activities: &["Substitution of the pitch back-up batteries."],
        gen_periodicity: Some("48 months"),
        target: "PitchSystem",
    },
    PinnedPreventive {
        act: 63,
        details: "Inspection of the clearance between pinion and crown",
        activities: &["Inspection of the clearance between pinion and crown."],
        gen_periodicity: Some("12 months"),
        target: "PitchSystem",
    },
    PinnedPreventive {
        act: 64,
        details: "Gear oil substitution",
        activities: &["Substitution of the pitch gear oil."],
        gen_periodicity: Some("60 months"),
        target: "PitchSystem",
    },
    PinnedPreventive {
        act: 100,
        details: "Checking Main Bearing Noises",
        activities: &[
            "It is mandatory to listen to any noise or vibration from the bearing mounting \
             when rotor is turning slowly.",
            "Another verification is to make the rotor turn slowly, then stop the turbine by \
             pushing an emergency button and looking at the clearance between the main shaft \
             and the bearing shield.",
        ],
        gen_periodicity: None,
        target: "MainShaft",
    },
    PinnedPreventive {
        act: 120,
        details: "Gearbox oil replacement",
        activities: &["Replacement of the gearbox oil charge."],
        gen_periodicity: Some("48 months"),
        target: "Gearbox",
    },
    PinnedPreventive {
        act: 121,
        details: "Gearbox vent filter replacement",
        activities: &["Replacement of the gearbox vent filter."],
        gen_periodicity: Some("12 months"),
        target: "Gearbox",
    },
    PinnedPreventive {
        act: 122,
        details: "Gearbox supports inspection",
        activities: &["Inspection of the gearbox support elements."],
        gen_periodicity: Some("12 months"),
        target: "Gearbox",
    },
    PinnedPreventive {
        act: 123,
        details: "Cooling system for gearbox- General inspection",
        activities: &["General inspection of the gearbox cooling system."],
        gen_periodicity: Some("12 months"),
        target: "Gearbox",
    },
    PinnedPreventive {
        act: 124,
        details: "Cooling system for gearbox- Oil filter substitution",
        activities: &["Substitution of the gearbox cooling-circuit oil filter."],
        gen_periodicity: Some("12 months"),
        target: "Gearbox",
    },
    PinnedPreventive {
        act: 195,
        details: "WINDING HEATERS",
        activities: &[
            "Firstly, it is necessary to disconnect the automatic switch. Then, the resistance \
             connected would be released and it would be checked that the resistor is not open. \
             If it is open, it must be changed.",
        ],
        gen_periodicity: None,
        target: "Generator",
    },
];

// MainShaft acts beyond the pinned PrevAct100.
const MAIN_SHAFT_ACTS: [usize; 4] = [96, 97, 98, 99];

/// FOR target of each preventive action, indexed by act number.
fn preventive_targets() -> Vec<&'static str> {
    let mut targets: Vec<Option<&'static str>> = vec![None; PREVENTIVE_COUNT + 1];
    for pinned in &PINNED_PREVENTIVE {
        targets[pinned.act] = Some(pinned.target);
    }
    for act in MAIN_SHAFT_ACTS {
        targets[act] = Some("MainShaft");
    }
    // quotas keep the frequently failing subsystems maintenance-heavy
    let mut fill: Vec<&'static str> = Vec::new();
    let quotas: [(&'static str, usize); 11] = [
        ("PitchSystem", 23),
        ("Yaw", 28),
        ("Generator", 27),
        ("ESC", 28),
        ("Transformer", 28),
        ("Gearbox", 23),
        ("Blades", 12),
        ("Converter", 12),
        ("HydraulicSystem", 12),
        ("DriveTrain", 12),
        ("FCS", 12),
    ];
    for (target, count) in quotas {
        fill.extend(std::iter::repeat_n(target, count));
    }
    let mut fill = fill.into_iter();
    (1..=PREVENTIVE_COUNT)
        .map(|act| targets[act].unwrap_or_else(|| fill.next().expect("fill quota")))
        .collect()
}

fn preventive_actions() -> Vec<PreventiveEntry> {
    const PERIODS: [&str; 4] = ["6 months", "12 months", "24 months", "48 months"];
    (1..=PREVENTIVE_COUNT)
        .map(|act| {
            if let Some(pinned) = PINNED_PREVENTIVE.iter().find(|p| p.act == act) {
                PreventiveEntry {
                    label: format!("PrevAct{act}"),
                    act: act as i64,
                    details: pinned.details.into(),
                    activities: strs(pinned.activities),
                    gen_periodicity: pinned.gen_periodicity.map(str::to_string),
                    initial_periodicity: None,
                    placeholder: false,
                }
            } else {
                PreventiveEntry {
                    label: format!("PrevAct{act}"),
                    act: act as i64,
                    details: format!("Scheduled inspection task P{act} (placeholder)"),
                    activities: vec![format!(
                        "Placeholder activity description for preventive task {act}."
                    )],
                    gen_periodicity: Some(PERIODS[act % PERIODS.len()].to_string()),
                    initial_periodicity: if act % 9 == 0 {
                        Some("3 months".to_string())
                    } else {
                        None
                    },
                    placeholder: true,
                }
            }
        })
        .collect()
}

const PREDICTIVE_TARGETS: [&str; 11] = [
    "Converter",
    "Gearbox",
    "Generator",
    "PitchSystem",
    "Yaw",
    "Blades",
    "Transformer",
    "HydraulicSystem",
    "ESC",
    "DriveTrain",
    "FCS",
];

fn predictive_actions() -> Vec<PredictiveEntry> {
    let mut out = vec![PredictiveEntry {
        label: "PredAct1".into(),
        details: "Power wires".into(),
        activities: strs(&[
            "The power connections are formed by wires through which high intensities run, \
             converter input and output and its rotor exits, connected with ring connectors \
             through whose hole passes the screw that is to join them to the terminal passes.",
        ]),
        image_urls: vec![format!("{IMAGE_HOST}/Wires_MountedOverReactance.png")],
        placeholder: false,
    }];
    for k in 2..=PREDICTIVE_COUNT {
        out.push(PredictiveEntry {
            label: format!("PredAct{k}"),
            details: format!("Condition monitoring programme PD{k} (placeholder)"),
            activities: vec![format!(
                "Placeholder condition-monitoring routine for predictive action {k}."
            )],
            image_urls: vec![],
            placeholder: true,
        });
    }
    out
}

fn corrective_activities(k: usize) -> Option<Vec<String>> {
    let steps: &[&str] = match k {
        1 => &[
            "Checking to see if counters are working correctly in manual yaw. If not, the \
             encoder has to be replaced",
            "Untwisting the turbine, resetting turtle, and resetting the counters on the \
             touchscreen",
            "Checking wiring breaks, connection points, cuts",
            "Checking connection on the I/O card",
        ],
        24 => &[
            "Looking for bearing damages",
            "Checking the multiplier pump/ cooling units",
            "Checking the wiring and cables for damages",
        ],
        25 => &[
            "Checking the adjustment of louvers",
            "Gearbox PT sensor",
            "Checking the wires for damages and appropriate connections",
            "Making sure the bearing temperature is higher than oil temperature, if not the \
             wiring could be swapped",
            "Making sure the PLC is reading oil temperature correctly. If it is too high, it \
             implies that the pump is running too often",
        ],
        26 => &[
            "Listening for any unusual noise coming from bearing (could be a bad bearing)",
            "Checking the temperature touchscreen. Replacing the PT100 or temperature card",
            "Making sure the lubber has enough grease and it is flowing into the bearing",
        ],
        30 => &[
            "High temperature on INU IGBT's",
            "Checking and saving the fault log and data logger",
            "Checking the ambient temperatures",
            "Checking the air flow and fan operation",
            "Checking and clearing air filters in the cabinet and drivers",
        ],
        31 => &[
            "Opening the louvers on generator",
            "Checking the motor fan condition",
            "Checking the PT sensor",
            "Checking the Temperature I/O card",
        ],
        32 => &[
            "Checking the temperatures",
            "Checking the PT sensor wiring",
            "Checking the PT placement",
            "Checking the PT card connections",
        ],
        37 => &["Resetting the switch/breaker", "Checking the amp settings"],
        40 => &[
            "Checking the on-site wind speed",
            "Checking the wires and voltages in the connection box",
            "Checking for ice build up on the Sonic and Anemometer",
        ],
        43 => &[
            "Making sure the balluf cable is not disconnected",
            "Checking the balluf condition",
            "Checking proportional valve or cable",
            "Checking the relays for each blade in the hub cabinet",
        ],
        44 => &[
            "Checking the rotor sensor connection",
            "Checking for loose connections in the A-9 box",
            "Checking for damaged cables",
            "Verifying the wiring",
            "Visually inspecting the blades for ice build up",
        ],
        45 => &[
            "Checking the power supply",
            "Checking the cables and electrovalves for damage",
            "Verifying the I/O modules in the hub",
            "Swapping the cards between blades to see if fault is associated to one specific blade.",
            "Verifying the balluf settings",
        ],
        _ => return None,
    };
    Some(strs(steps))
}

fn corrective_actions() -> Vec<CorrectiveEntry> {
    (1..=CORRECTIVE_COUNT)
        .map(|k| match corrective_activities(k) {
            Some(activities) => CorrectiveEntry {
                label: format!("CorrAct{k}"),
                activities,
                image_urls: if k == 25 {
                    vec![
                        format!("{IMAGE_HOST}/Gearbox_ConnectionDiagram.png"),
                        format!("{IMAGE_HOST}/Gearbox_Assembly.png"),
                        format!("{IMAGE_HOST}/Bearing_Change.png"),
                    ]
                } else {
                    vec![]
                },
                placeholder: false,
            },
            None => CorrectiveEntry {
                label: format!("CorrAct{k}"),
                activities: vec![
                    format!("Placeholder corrective step 1 for fault condition F{k}."),
                    format!("Placeholder corrective step 2 for fault condition F{k}."),
                ],
                image_urls: vec![],
                placeholder: true,
            },
        })
        .collect()
}

/// RELATESTO mapping from functional groups to the subsystems they concern.
/// NoFault denotes normal operation and maps to no subsystem. Pairs beyond
/// the obvious ones are fixture placeholders.
const GROUP_SUBSYSTEM: [(&str, &str); 13] = [
    ("IPR", "Converter"),
    ("Pitch", "PitchSystem"),
    ("PitchInterfaceAlarm", "PitchSystem"),
    ("PitchEFCMon", "PitchSystem"),
    ("PCS", "Converter"),
    ("PPD", "Generator"),
    ("YawFG", "Yaw"),
    ("HydraulicSys", "HydraulicSystem"),
    ("WindAlr", "ESC"),
    ("GearboxFG", "Gearbox"),
    ("MVTR", "FCS"),
    ("Test", "ESC"),
    ("YawBrake", "Yaw"),
];

/// AFFECTS mapping from fault events to functional groups.
fn affected_group(k: usize) -> &'static str {
    match k {
        1 | 2 => "YawFG",
        24 | 25 | 37 => "GearboxFG",
        43..=45 => "Pitch",
        26 | 30 | 31 | 50 => "PCS",
        32 => "PPD",
        40 => "WindAlr",
        _ => {
            const CYCLE: [&str; 13] = [
                "IPR",
                "Pitch",
                "PitchInterfaceAlarm",
                "PitchEFCMon",
                "PCS",
                "PPD",
                "YawFG",
                "HydraulicSys",
                "WindAlr",
                "GearboxFG",
                "MVTR",
                "Test",
                "YawBrake",
            ];
            CYCLE[k % CYCLE.len()]
        }
    }
}

/// Subsystem monitored by each desk-scale SCADA feature (the ninth
/// relationship type in the catalogue).
const FEATURE_MONITORS: [(&str, &str); 12] = [
    ("GearBoxTemperature_DegC_Mean", "Gearbox"),
    ("GearBoxTemperature_DegC_Max", "Gearbox"),
    ("GBoxOpShaftBearingTemp1_Stdev", "Gearbox"),
    ("Pitch_Deg_Max", "PitchSystem"),
    ("Pitch_Deg_Mean", "PitchSystem"),
    ("WindSpeed_mps_Mean", "ESC"),
    ("AbsoluteWindDirection_Deg_Mean", "Yaw"),
    ("YawError_Deg_Mean", "Yaw"),
    ("Power_kW_Stdev", "Generator"),
    ("ReactivePower_kVAr_Max", "Transformer"),
    ("GenBearingtemp2_Mean", "Generator"),
    ("NacInsidetemp_Min", "ESC"),
];

const COMPONENT_LINKS: [(&str, &str); 20] = [
    ("System", "Environment"),
    ("DriveTrain", "MainShaft"),
    ("Yaw", "ParkBrake"),
    ("ESC", "PowerCabinet"),
    ("ESC", "CommNetwork"),
    ("FCS", "GLLP"),
    ("System", "Nacelle"),
    ("System", "Rotor"),
    ("Rotor", "Hub"),
    ("FCS", "Tower"),
    ("Environment", "Anemometer"),
    ("Environment", "WindVane"),
    ("Environment", "MeteoStation"),
    ("Gearbox", "CoolingSystem"),
    ("Gearbox", "LubricationSystem"),
    ("Generator", "SlipRing"),
    ("Yaw", "YawMotor"),
    ("Tower", "Elevator"),
    ("DriveTrain", "Gearbox"),
    ("DriveTrain", "Generator"),
];

fn relationships(feature_entries: &[FeatureEntry]) -> Vec<ManifestRelationship> {
    let link = |rel_type: &str, start: &str, end: &str| ManifestRelationship {
        rel_type: rel_type.into(),
        start: start.into(),
        end: end.into(),
    };
    let mut out = Vec::new();

    // FOR: preventive and predictive actions target equipment, corrective
    // actions target the fault event they fix.
    for (idx, target) in preventive_targets().iter().enumerate() {
        out.push(link("FOR", &format!("PrevAct{}", idx + 1), target));
    }
    for (idx, target) in PREDICTIVE_TARGETS.iter().enumerate() {
        out.push(link("FOR", &format!("PredAct{}", idx + 1), target));
    }
    for k in 1..=CORRECTIVE_COUNT {
        out.push(link("FOR", &format!("CorrAct{k}"), &format!("FaultEvent{k}")));
    }

    for (group, subsystem) in GROUP_SUBSYSTEM {
        out.push(link("RELATESTO", group, subsystem));
    }

    // Alarms map to fault events; only the first examples are documented.
    for i in 1..=ALARM_COUNT {
        let fe = match i {
            1 => 26,
            2 => 2,
            4 => 45,
            5 => 43,
            _ => ((i * 11) % FAULT_EVENT_COUNT) + 1,
        };
        out.push(link("RELATESTO", &format!("Alarm{i}"), &format!("FaultEvent{fe}")));
    }

    // Features map to the fault events they contribute to.
    let named: HashSet<&str> = NAMED_FEATURES.iter().map(|f| f.name).collect();
    for feature in &NAMED_FEATURES {
        for fe in feature.fault_events {
            out.push(link("RELATESTO", feature.name, &format!("FaultEvent{fe}")));
        }
    }
    let generated: Vec<&FeatureEntry> = feature_entries
        .iter()
        .filter(|f| !named.contains(f.name.as_str()))
        .collect();
    for (i, feature) in generated.iter().enumerate() {
        let first = ((i * 13) % FAULT_EVENT_COUNT) + 1;
        out.push(link("RELATESTO", &feature.name, &format!("FaultEvent{first}")));
        if i < 37 {
            let mut second = ((i * 17 + 5) % FAULT_EVENT_COUNT) + 1;
            while second == first {
                second = (second % FAULT_EVENT_COUNT) + 1;
            }
            out.push(link("RELATESTO", &feature.name, &format!("FaultEvent{second}")));
        }
    }

    // The SCADA dataset consists of its features; components nest under
    // their parent equipment.
    for feature in feature_entries {
        out.push(link("CONSISTSOF", "SCADA", &feature.name));
    }
    for (parent, child) in COMPONENT_LINKS {
        out.push(link("CONSISTSOF", parent, child));
    }

    for k in 1..=FAULT_EVENT_COUNT {
        out.push(link("AFFECTS", &format!("FaultEvent{k}"), affected_group(k)));
    }

    for (feature, subsystem) in FEATURE_MONITORS {
        out.push(link("MONITORS", feature, subsystem));
    }

    out
}

/// The full bundled manifest.
pub fn bundled_manifest() -> OntologyManifest {
    let features = features();
    let relationships = relationships(&features);
    let mut hub_properties = BTreeMap::new();
    let mut preventive_hub = BTreeMap::new();
    preventive_hub.insert(
        "Cleaning".to_string(),
        PropertyValue::TextList(strs(&[
            "Cleaning everything (grease, oil, dust, rags, other maintenance, carbon rings, \
             collectors, etc.)",
            "Treating waste in accordance with procedures",
        ])),
    );
    preventive_hub.insert(
        "Retightening".to_string(),
        PropertyValue::TextList(strs(&[
            "All bolted joints need to be proven to not lose their tightening.",
        ])),
    );
    hub_properties.insert("Preventive".to_string(), preventive_hub);

    OntologyManifest {
        manifest_version: 1,
        name: "levenmouth-demo-turbine".into(),
        declared_node_total: Some(537),
        declared_relationship_total: Some(1059),
        system: SystemEntry {
            name: "Study Turbine".into(),
            location: "Levenmouth,Fife".into(),
            rated_power: "7MW".into(),
            turbine_type: "Offshore".into(),
        },
        subsystems: subsystems(),
        components: components(),
        functional_groups: functional_groups(),
        features,
        alarms: alarms(),
        fault_events: fault_events(),
        preventive_actions: preventive_actions(),
        predictive_actions: predictive_actions(),
        corrective_actions: corrective_actions(),
        hub_properties,
        relationships,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_features_exist_in_catalogue() {
        let manifest = bundled_manifest();
        for name in DESK_FEATURES {
            assert!(
                manifest.features.iter().any(|f| f.name == name),
                "missing desk feature {name}"
            );
        }
    }

    #[test]
    fn quoted_fixture_values_present() {
        let manifest = bundled_manifest();
        let fe25 = manifest.fault_events.iter().find(|f| f.label == "FaultEvent25").unwrap();
        assert_eq!(fe25.details, "High temperature on the gearbox oil");
        let f51 = manifest.features.iter().find(|f| f.feature_no == 51).unwrap();
        assert_eq!(f51.name, "GearBoxTemperature_DegC_Mean");
        let p195 = manifest.preventive_actions.iter().find(|p| p.act == 195).unwrap();
        assert_eq!(p195.details, "WINDING HEATERS");
        let c45 = manifest.corrective_actions.iter().find(|c| c.label == "CorrAct45").unwrap();
        assert!(c45.activities.iter().any(|a| a == "Checking the power supply"));
    }

    #[test]
    fn preventive_targets_cover_all_actions() {
        let targets = preventive_targets();
        assert_eq!(targets.len(), PREVENTIVE_COUNT);
        let gearbox = targets.iter().filter(|t| **t == "Gearbox").count();
        assert_eq!(gearbox, 28);
        let main_shaft = targets.iter().filter(|t| **t == "MainShaft").count();
        assert_eq!(main_shaft, 5);
    }
}

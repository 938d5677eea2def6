//! The checked-in fixture directories, compiled into the binary.

use mobidesc_core::Slot;

use crate::fixtures::FixtureName;

const MALL_LATEST_OFFER: &[(Slot, &str)] = &[
    (
        Slot::Functional,
        include_str!("../fixtures/MallLatestOffer/functional.xml"),
    ),
    (
        Slot::NonFunctional,
        include_str!("../fixtures/MallLatestOffer/nonFunctional.xml"),
    ),
    (
        Slot::Contextual,
        include_str!("../fixtures/MallLatestOffer/contextual.xml"),
    ),
    (Slot::Business, include_str!("../fixtures/MallLatestOffer/business.xml")),
    (
        Slot::DataSourceStatic,
        include_str!("../fixtures/MallLatestOffer/dataSource-static.xml"),
    ),
    (
        Slot::DataSourceDynamic,
        include_str!("../fixtures/MallLatestOffer/dataSource-dynamic.xml"),
    ),
    (
        Slot::Collaborator,
        include_str!("../fixtures/MallLatestOffer/collaborator.xml"),
    ),
    (
        Slot::HardwareStatic,
        include_str!("../fixtures/MallLatestOffer/hardware-static.xml"),
    ),
    (
        Slot::HardwareDynamic,
        include_str!("../fixtures/MallLatestOffer/hardware-dynamic.xml"),
    ),
    (
        Slot::ConsumerBase,
        include_str!("../fixtures/MallLatestOffer/consumerBase.xml"),
    ),
];

const SALESMAN_TRACKING: &[(Slot, &str)] = &[
    (
        Slot::Functional,
        include_str!("../fixtures/SalesmanTracking/functional.xml"),
    ),
    (
        Slot::NonFunctional,
        include_str!("../fixtures/SalesmanTracking/nonFunctional.xml"),
    ),
    (
        Slot::Contextual,
        include_str!("../fixtures/SalesmanTracking/contextual.xml"),
    ),
    (
        Slot::Business,
        include_str!("../fixtures/SalesmanTracking/business.xml"),
    ),
    (
        Slot::DataSourceStatic,
        include_str!("../fixtures/SalesmanTracking/dataSource-static.xml"),
    ),
    (
        Slot::DataSourceDynamic,
        include_str!("../fixtures/SalesmanTracking/dataSource-dynamic.xml"),
    ),
    (
        Slot::Collaborator,
        include_str!("../fixtures/SalesmanTracking/collaborator.xml"),
    ),
    (
        Slot::HardwareStatic,
        include_str!("../fixtures/SalesmanTracking/hardware-static.xml"),
    ),
    (
        Slot::HardwareDynamic,
        include_str!("../fixtures/SalesmanTracking/hardware-dynamic.xml"),
    ),
    (
        Slot::ConsumerBase,
        include_str!("../fixtures/SalesmanTracking/consumerBase.xml"),
    ),
];

const CAR_POOLING_MATE: &[(Slot, &str)] = &[
    (
        Slot::Functional,
        include_str!("../fixtures/CarPoolingMate/functional.xml"),
    ),
    (
        Slot::NonFunctional,
        include_str!("../fixtures/CarPoolingMate/nonFunctional.xml"),
    ),
    (
        Slot::Contextual,
        include_str!("../fixtures/CarPoolingMate/contextual.xml"),
    ),
    (Slot::Business, include_str!("../fixtures/CarPoolingMate/business.xml")),
    (
        Slot::HardwareStatic,
        include_str!("../fixtures/CarPoolingMate/hardware-static.xml"),
    ),
    (
        Slot::HardwareDynamic,
        include_str!("../fixtures/CarPoolingMate/hardware-dynamic.xml"),
    ),
    (
        Slot::ConsumerBase,
        include_str!("../fixtures/CarPoolingMate/consumerBase.xml"),
    ),
];

pub fn files(name: FixtureName) -> &'static [(Slot, &'static str)] {
    match name {
        FixtureName::MallLatestOffer => MALL_LATEST_OFFER,
        FixtureName::SalesmanTracking => SALESMAN_TRACKING,
        FixtureName::CarPoolingMate => CAR_POOLING_MATE,
    }
}
